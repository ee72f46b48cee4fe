#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace polyproj {

/** Base class for every error raised by the library. */
class Error : public std::runtime_error
{
    public:
        explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/** A square system has no unique solution (pivot below the absolute tolerance). */
class SingularError : public Error
{
    public:
        explicit SingularError(const std::string& what = "singular matrix") : Error(what) {}
};

/** A homogeneous system has a nullspace of dimension other than one. */
class RankError : public Error
{
    public:
        explicit RankError(const std::string& what = "rank deficient system") : Error(what) {}
};

/** The reference point lies on the hyperplane, so orientation is ambiguous. */
class DegenerateError : public Error
{
    public:
        explicit DegenerateError(const std::string& what = "reference point lies on hyperplane")
            : Error(what) {}
};

/** The simplex hit its iteration cap. */
class NumericalFailure : public Error
{
    public:
        explicit NumericalFailure(const std::string& what) : Error(what) {}
};

/** Malformed input text. */
class ParseError : public Error
{
    public:
        explicit ParseError(const std::string& what) : Error(what) {}
};

/** Well-formed input that violates a model invariant. */
class ValidationError : public Error
{
    public:
        explicit ValidationError(const std::string& what) : Error(what) {}
};

class InteriorPointInvalid : public Error
{
    public:
        explicit InteriorPointInvalid(const std::string& what) : Error(what) {}
};

class ModelInfeasible : public Error
{
    public:
        explicit ModelInfeasible(const std::string& what) : Error(what) {}
};

/** NBPG cannot move away from a boundary point along some axis (typically a vertex). */
class BadBoundaryPoint : public Error
{
    public:
        BadBoundaryPoint(std::vector<double> point, std::size_t axis)
            : Error("bad boundary point: no displacement along axis " + std::to_string(axis)),
              point_(std::move(point)), axis_(axis) {}

        const std::vector<double>& point() const { return point_; }
        std::size_t axis() const { return axis_; }

    private:
        std::vector<double> point_;
        std::size_t axis_;
};

class DepaExhausted : public Error
{
    public:
        explicit DepaExhausted(const std::string& what) : Error(what) {}
};

class SizeGuardExceeded : public Error
{
    public:
        explicit SizeGuardExceeded(const std::string& what) : Error(what) {}
};

class UnboundedRegion : public Error
{
    public:
        explicit UnboundedRegion(const std::string& what) : Error(what) {}
};

}  // namespace polyproj
