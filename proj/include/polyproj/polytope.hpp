#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "polyproj/numeric.hpp"

namespace polyproj {

enum class Provenance { InitialBox, Discovered };

std::string_view to_string(Provenance p);
Provenance provenance_from_string(std::string_view s);

/**
 * H-representation { w : normal_k . w + offset_k <= 0 for every facet k }
 * together with the box [0, box_max] it was started from.
 */
struct Polytope
{
    std::size_t dimension = 0;
    std::vector<Hyperplane> facets;
    std::vector<Provenance> provenance;
    Vec box_max;

    /// The 2n facets w_i <= box_max_i and -w_i <= 0, all tagged InitialBox.
    static Polytope box(const Vec& box_max);

    void add(Hyperplane h, Provenance p);
    void remove(std::size_t k);

    std::size_t count(Provenance p) const;

    /// Largest facet value at w (positive means violated).
    double max_violation(std::span<const double> w) const;
    bool contains(std::span<const double> w, double tol) const { return max_violation(w) <= tol; }
};

}  // namespace polyproj
