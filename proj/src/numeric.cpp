#include "polyproj/numeric.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "polyproj/errors.hpp"

namespace polyproj {

namespace {

constexpr double kPivotTol = 1e-11;
constexpr double kRankTol = 1e-9;
constexpr double kDegenerateTol = 1e-10;

}  // namespace

Mat::Mat(std::initializer_list<std::initializer_list<double>> rows)
{
    for (const auto& r : rows) {
        append_row(std::span<const double>(r.begin(), r.size()));
    }
}

void Mat::append_row(std::span<const double> values)
{
    if (rows_ == 0 && cols_ == 0) cols_ = values.size();
    if (values.size() != cols_) {
        throw Error("Mat::append_row: expected " + std::to_string(cols_) + " columns, got " +
                    std::to_string(values.size()));
    }
    data_.insert(data_.end(), values.begin(), values.end());
    ++rows_;
}

std::span<double> Mat::append_zero_row()
{
    data_.resize(data_.size() + cols_, 0.0);
    ++rows_;
    return row(rows_ - 1);
}

void Mat::reset_cols(std::size_t cols)
{
    if (rows_ != 0) throw Error("Mat::reset_cols on a non-empty matrix");
    cols_ = cols;
}

double Mat::norm_inf() const
{
    double best = 0.0;
    for (std::size_t r = 0; r < rows_; ++r) {
        double s = 0.0;
        for (double v : row(r)) s += std::abs(v);
        best = std::max(best, s);
    }
    return best;
}

double Hyperplane::eval(std::span<const double> w) const
{
    return dot(normal, w) + offset;
}

double dot(std::span<const double> a, std::span<const double> b)
{
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double norm2(std::span<const double> a)
{
    return std::sqrt(dot(a, a));
}

double norm_inf(std::span<const double> a)
{
    double m = 0.0;
    for (double v : a) m = std::max(m, std::abs(v));
    return m;
}

Vec mat_vec(const Mat& a, std::span<const double> x)
{
    Vec y(a.rows(), 0.0);
    for (std::size_t r = 0; r < a.rows(); ++r) y[r] = dot(a.row(r), x);
    return y;
}

Vec solve_square(Mat a, Vec b)
{
    const std::size_t n = a.rows();
    if (a.cols() != n || b.size() != n) throw Error("solve_square: dimension mismatch");

    for (std::size_t k = 0; k < n; ++k) {
        std::size_t piv = k;
        for (std::size_t r = k + 1; r < n; ++r) {
            if (std::abs(a(r, k)) > std::abs(a(piv, k))) piv = r;
        }
        if (std::abs(a(piv, k)) < kPivotTol) throw SingularError();
        if (piv != k) {
            for (std::size_t c = 0; c < n; ++c) std::swap(a(k, c), a(piv, c));
            std::swap(b[k], b[piv]);
        }
        for (std::size_t r = k + 1; r < n; ++r) {
            const double f = a(r, k) / a(k, k);
            if (f == 0.0) continue;
            for (std::size_t c = k; c < n; ++c) a(r, c) -= f * a(k, c);
            b[r] -= f * b[k];
        }
    }
    Vec x(n, 0.0);
    for (std::size_t k = n; k-- > 0;) {
        double s = b[k];
        for (std::size_t c = k + 1; c < n; ++c) s -= a(k, c) * x[c];
        x[k] = s / a(k, k);
    }
    return x;
}

Vec nullspace_1d(const Mat& m)
{
    const std::size_t rows = m.rows();
    const std::size_t cols = m.cols();
    if (cols != rows + 1) throw Error("nullspace_1d: expected n x (n+1) matrix");

    Mat a = m;
    std::vector<std::size_t> pivot_cols;
    double max_pivot = 0.0;
    std::size_t r = 0;
    for (std::size_t c = 0; c < cols && r < rows; ++c) {
        std::size_t piv = r;
        for (std::size_t i = r + 1; i < rows; ++i) {
            if (std::abs(a(i, c)) > std::abs(a(piv, c))) piv = i;
        }
        const double p = std::abs(a(piv, c));
        if (p == 0.0 || (max_pivot > 0.0 && p <= kRankTol * max_pivot)) continue;
        max_pivot = std::max(max_pivot, p);
        if (piv != r) {
            for (std::size_t j = 0; j < cols; ++j) std::swap(a(r, j), a(piv, j));
        }
        const double inv = 1.0 / a(r, c);
        for (std::size_t j = 0; j < cols; ++j) a(r, j) *= inv;
        for (std::size_t i = 0; i < rows; ++i) {
            if (i == r) continue;
            const double f = a(i, c);
            if (f == 0.0) continue;
            for (std::size_t j = 0; j < cols; ++j) a(i, j) -= f * a(r, j);
        }
        pivot_cols.push_back(c);
        ++r;
    }
    if (pivot_cols.size() != rows) {
        throw RankError("nullspace_1d: numerical rank " + std::to_string(pivot_cols.size()) +
                        " < " + std::to_string(rows));
    }

    std::size_t free_col = cols - 1;
    for (std::size_t c = 0, k = 0; c < cols; ++c) {
        if (k < pivot_cols.size() && pivot_cols[k] == c) {
            ++k;
        } else {
            free_col = c;
            break;
        }
    }

    Vec v(cols, 0.0);
    v[free_col] = 1.0;
    for (std::size_t k = 0; k < pivot_cols.size(); ++k) v[pivot_cols[k]] = -a(k, free_col);
    const double nrm = norm2(v);
    for (double& x : v) x /= nrm;
    return v;
}

Hyperplane orient_and_normalize(Vec c, double d, std::span<const double> interior)
{
    const double nrm = norm2(c);
    if (nrm <= kDegenerateTol) throw DegenerateError("orient_and_normalize: zero normal");
    for (double& x : c) x /= nrm;
    d /= nrm;
    const double side = dot(c, interior) + d;
    if (std::abs(side) <= kDegenerateTol) throw DegenerateError();
    if (side > 0.0) {
        for (double& x : c) x = -x;
        d = -d;
    }
    return Hyperplane{std::move(c), d};
}

double facet_cosine(const Hyperplane& h1, const Hyperplane& h2)
{
    return std::clamp(dot(h1.normal, h2.normal), -1.0, 1.0);
}

bool same_hyperplane(const Hyperplane& h1, const Hyperplane& h2)
{
    return facet_cosine(h1, h2) >= 1.0 - 1e-10 && std::abs(h1.offset - h2.offset) <= 1e-8;
}

}  // namespace polyproj
