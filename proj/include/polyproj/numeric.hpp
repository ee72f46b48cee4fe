#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace polyproj {

using Vec = std::vector<double>;

/** Dense row-major matrix. Rows can be appended after construction. */
class Mat
{
    public:
        Mat() = default;
        Mat(std::size_t rows, std::size_t cols, double fill = 0.0)
            : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
        Mat(std::initializer_list<std::initializer_list<double>> rows);

        std::size_t rows() const { return rows_; }
        std::size_t cols() const { return cols_; }
        bool empty() const { return rows_ == 0; }

        double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
        double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

        std::span<double> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
        std::span<const double> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }

        /// Appends a row; the first append on a 0x0 matrix fixes the column count.
        void append_row(std::span<const double> values);
        /// Appends a zero row and returns it for filling.
        std::span<double> append_zero_row();

        /// Sets the column count of an empty matrix.
        void reset_cols(std::size_t cols);

        double norm_inf() const;
        const std::vector<double>& data() const { return data_; }

        bool operator==(const Mat&) const = default;

    private:
        std::size_t rows_ = 0;
        std::size_t cols_ = 0;
        std::vector<double> data_;
};

/**
 * Oriented hyperplane normal . w + offset = 0. The inequality sense is always
 * normal . w + offset <= 0, and normal has unit 2-norm.
 */
struct Hyperplane
{
    Vec normal;
    double offset = 0.0;

    double eval(std::span<const double> w) const;
};

double dot(std::span<const double> a, std::span<const double> b);
double norm2(std::span<const double> a);
double norm_inf(std::span<const double> a);
Vec mat_vec(const Mat& a, std::span<const double> x);

/// Solves A x = b by Gaussian elimination with partial pivoting.
/// Throws SingularError when a pivot magnitude falls below 1e-11.
Vec solve_square(Mat a, Vec b);

/**
 * Unit vector spanning the nullspace of an n x (n+1) matrix.
 *
 * Reduces the matrix to echelon form with partial pivoting. A pivot is
 * considered zero when it is below 1e-9 times the largest pivot seen, and
 * RankError is thrown unless exactly n pivots are found.
 */
Vec nullspace_1d(const Mat& m);

/// Scales (c, d) to a unit normal and flips the sign so that `interior` is on
/// the non-positive side. Throws DegenerateError when `interior` is within
/// 1e-10 of the plane, or when |c| <= 1e-10.
Hyperplane orient_and_normalize(Vec c, double d, std::span<const double> interior);

/// Dot product of the two unit normals, clamped to [-1, 1].
double facet_cosine(const Hyperplane& h1, const Hyperplane& h2);

/// Dedup rule: cosine >= 1 - 1e-10 and offsets within 1e-8.
bool same_hyperplane(const Hyperplane& h1, const Hyperplane& h2);

}  // namespace polyproj
