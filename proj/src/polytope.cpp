#include "polyproj/polytope.hpp"

#include <algorithm>
#include <limits>
#include <string>

#include "polyproj/errors.hpp"

namespace polyproj {

std::string_view to_string(Provenance p)
{
    return p == Provenance::InitialBox ? "InitialBox" : "Discovered";
}

Provenance provenance_from_string(std::string_view s)
{
    if (s == "InitialBox") return Provenance::InitialBox;
    if (s == "Discovered") return Provenance::Discovered;
    throw ParseError("unknown facet provenance \"" + std::string(s) + "\"");
}

Polytope Polytope::box(const Vec& box_max)
{
    Polytope p;
    p.dimension = box_max.size();
    p.box_max = box_max;
    for (std::size_t i = 0; i < p.dimension; ++i) {
        Vec n(p.dimension, 0.0);
        n[i] = 1.0;
        p.add({n, -box_max[i]}, Provenance::InitialBox);
    }
    for (std::size_t i = 0; i < p.dimension; ++i) {
        Vec n(p.dimension, 0.0);
        n[i] = -1.0;
        p.add({n, 0.0}, Provenance::InitialBox);
    }
    return p;
}

void Polytope::add(Hyperplane h, Provenance p)
{
    if (h.normal.size() != dimension) throw ValidationError("facet dimension mismatch");
    facets.push_back(std::move(h));
    provenance.push_back(p);
}

void Polytope::remove(std::size_t k)
{
    facets.erase(facets.begin() + static_cast<std::ptrdiff_t>(k));
    provenance.erase(provenance.begin() + static_cast<std::ptrdiff_t>(k));
}

std::size_t Polytope::count(Provenance p) const
{
    return static_cast<std::size_t>(std::count(provenance.begin(), provenance.end(), p));
}

double Polytope::max_violation(std::span<const double> w) const
{
    double worst = -std::numeric_limits<double>::infinity();
    for (const Hyperplane& h : facets) worst = std::max(worst, h.eval(w));
    return worst;
}

}  // namespace polyproj
