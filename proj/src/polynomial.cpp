#include "ousector/polynomial.hpp"

#include <cmath>
#include <functional>

namespace ousector {

Polynomial::Polynomial(int dim, double constant) : dim_(dim) {
    if (constant != 0.0) terms_[MultiIndex(dim, 0)] = constant;
}

Polynomial Polynomial::monomial(int dim, const MultiIndex& alpha, double coeff) {
    if (static_cast<int>(alpha.size()) != dim) {
        throw DimensionError("Polynomial::monomial: index size != dim");
    }
    Polynomial p(dim);
    if (coeff != 0.0) p.terms_[alpha] = coeff;
    return p;
}

Polynomial Polynomial::variable(int dim, int i) {
    MultiIndex a(dim, 0);
    a[i] = 1;
    return monomial(dim, a, 1.0);
}

int Polynomial::total_degree() const {
    int deg = 0;
    for (const auto& [a, c] : terms_) {
        int d = 0;
        for (int e : a) d += e;
        deg = std::max(deg, d);
    }
    return deg;
}

double Polynomial::eval(const Eigen::VectorXd& x) const {
    double out = 0.0;
    for (const auto& [a, c] : terms_) {
        double m = c;
        for (int i = 0; i < dim_; ++i) {
            for (int e = 0; e < a[i]; ++e) m *= x(i);
        }
        out += m;
    }
    return out;
}

Polynomial& Polynomial::operator+=(const Polynomial& other) {
    for (const auto& [a, c] : other.terms_) {
        auto [it, fresh] = terms_.try_emplace(a, c);
        if (!fresh) it->second += c;
        if (it->second == 0.0) terms_.erase(it);
    }
    return *this;
}

Polynomial& Polynomial::operator*=(double s) {
    if (s == 0.0) {
        terms_.clear();
        return *this;
    }
    for (auto& [a, c] : terms_) c *= s;
    return *this;
}

Polynomial Polynomial::operator+(const Polynomial& other) const {
    Polynomial out = *this;
    out += other;
    return out;
}

Polynomial Polynomial::operator*(const Polynomial& other) const {
    Polynomial out(dim_);
    for (const auto& [a, ca] : terms_) {
        for (const auto& [b, cb] : other.terms_) {
            MultiIndex s(dim_);
            for (int i = 0; i < dim_; ++i) s[i] = a[i] + b[i];
            out.terms_[s] += ca * cb;
        }
    }
    out.drop_small(0.0);
    return out;
}

Polynomial Polynomial::operator*(double s) const {
    Polynomial out = *this;
    out *= s;
    return out;
}

Polynomial Polynomial::operator-(const Polynomial& other) const {
    return *this + other * (-1.0);
}

Polynomial Polynomial::derivative(int i) const {
    Polynomial out(dim_);
    for (const auto& [a, c] : terms_) {
        if (a[i] == 0) continue;
        MultiIndex b = a;
        b[i] -= 1;
        out.terms_[b] += c * a[i];
    }
    return out;
}

Polynomial Polynomial::substitute_linear(const Eigen::MatrixXd& S) const {
    // Each variable y_i becomes the linear form sum_j S(i,j) x_j.
    std::vector<Polynomial> forms;
    forms.reserve(dim_);
    for (int i = 0; i < dim_; ++i) {
        Polynomial f(dim_);
        for (int j = 0; j < dim_; ++j) {
            if (S(i, j) != 0.0) f += Polynomial::variable(dim_, j) * S(i, j);
        }
        forms.push_back(std::move(f));
    }
    Polynomial out(dim_);
    for (const auto& [a, c] : terms_) {
        Polynomial term(dim_, c);
        for (int i = 0; i < dim_; ++i) {
            for (int e = 0; e < a[i]; ++e) term = term * forms[i];
        }
        out += term;
    }
    out.drop_small(0.0);
    return out;
}

void Polynomial::drop_small(double tol) {
    for (auto it = terms_.begin(); it != terms_.end();) {
        if (std::abs(it->second) <= tol) {
            it = terms_.erase(it);
        } else {
            ++it;
        }
    }
}

namespace {

double moment(const MultiIndex& alpha, const Eigen::MatrixXd& cov,
              std::map<MultiIndex, double>& cache) {
    int total = 0;
    for (int e : alpha) total += e;
    if (total == 0) return 1.0;
    if (total % 2 == 1) return 0.0;
    if (auto it = cache.find(alpha); it != cache.end()) return it->second;

    int i = 0;
    while (alpha[i] == 0) ++i;
    // Stein: E[x_i x^beta] = sum_j cov(i,j) beta_j E[x^{beta - e_j}].
    MultiIndex beta = alpha;
    beta[i] -= 1;
    double out = 0.0;
    const int n = static_cast<int>(alpha.size());
    for (int j = 0; j < n; ++j) {
        if (beta[j] == 0 || cov(i, j) == 0.0) continue;
        MultiIndex gamma = beta;
        gamma[j] -= 1;
        out += cov(i, j) * beta[j] * moment(gamma, cov, cache);
    }
    cache[alpha] = out;
    return out;
}

} // namespace

double gaussian_expectation(const Polynomial& p, const Eigen::MatrixXd& cov) {
    if (cov.rows() != p.dim() || cov.cols() != p.dim()) {
        throw DimensionError("gaussian_expectation: covariance dimension mismatch");
    }
    std::map<MultiIndex, double> cache;
    double out = 0.0;
    for (const auto& [a, c] : p.terms()) out += c * moment(a, cov, cache);
    return out;
}

Polynomial normalized_hermite(int dim, int i, int k) {
    // He_0 = 1, He_1 = y, He_{k+1} = y He_k - k He_{k-1}.
    Polynomial prev(dim, 1.0);
    if (k == 0) return prev;
    Polynomial y = Polynomial::variable(dim, i);
    Polynomial cur = y;
    for (int m = 1; m < k; ++m) {
        Polynomial next = y * cur - prev * static_cast<double>(m);
        prev = cur;
        cur = next;
    }
    double fact = 1.0;
    for (int m = 2; m <= k; ++m) fact *= m;
    return cur * (1.0 / std::sqrt(fact));
}

std::vector<MultiIndex> multi_indices_up_to(int dim, int degree) {
    std::vector<MultiIndex> out;
    // Grouped by total degree so the constant comes first.
    for (int d = 0; d <= degree; ++d) {
        std::vector<MultiIndex> layer;
        MultiIndex tmp(dim, 0);
        std::function<void(int, int)> fill = [&](int pos, int remaining) {
            if (pos == dim) {
                if (remaining == 0) layer.push_back(tmp);
                return;
            }
            for (int e = 0; e <= remaining; ++e) {
                tmp[pos] = e;
                fill(pos + 1, remaining - e);
            }
            tmp[pos] = 0;
        };
        fill(0, d);
        out.insert(out.end(), layer.begin(), layer.end());
    }
    return out;
}

} // namespace ousector
