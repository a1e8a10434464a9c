#include "susydec/polynomial.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>

namespace susydec {

Polynomial::Polynomial(std::initializer_list<double> coeffs)
    : coeffs_(coeffs) {
    trim();
}

Polynomial::Polynomial(std::vector<double> coeffs) : coeffs_(std::move(coeffs)) {
    trim();
}

Polynomial Polynomial::monomial(double coeff, unsigned degree) {
    std::vector<double> c(degree + 1, 0.0);
    c[degree] = coeff;
    return Polynomial(std::move(c));
}

void Polynomial::trim() {
    while (!coeffs_.empty() && coeffs_.back() == 0.0) coeffs_.pop_back();
}

double Polynomial::operator()(double x) const {
    double acc = 0.0;
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it)
        acc = acc * x + *it;
    return acc;
}

Polynomial Polynomial::derivative() const {
    if (coeffs_.size() <= 1) return {};
    std::vector<double> d(coeffs_.size() - 1);
    for (std::size_t k = 1; k < coeffs_.size(); ++k)
        d[k - 1] = static_cast<double>(k) * coeffs_[k];
    return Polynomial(std::move(d));
}

Polynomial Polynomial::operator-() const {
    Polynomial r(*this);
    for (auto& c : r.coeffs_) c = -c;
    return r;
}

Polynomial& Polynomial::operator+=(const Polynomial& rhs) {
    if (rhs.coeffs_.size() > coeffs_.size()) coeffs_.resize(rhs.coeffs_.size(), 0.0);
    for (std::size_t k = 0; k < rhs.coeffs_.size(); ++k) coeffs_[k] += rhs.coeffs_[k];
    trim();
    return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& rhs) {
    if (rhs.coeffs_.size() > coeffs_.size()) coeffs_.resize(rhs.coeffs_.size(), 0.0);
    for (std::size_t k = 0; k < rhs.coeffs_.size(); ++k) coeffs_[k] -= rhs.coeffs_[k];
    trim();
    return *this;
}

Polynomial operator*(const Polynomial& lhs, const Polynomial& rhs) {
    if (lhs.is_zero() || rhs.is_zero()) return {};
    std::vector<double> c(lhs.coeffs_.size() + rhs.coeffs_.size() - 1, 0.0);
    for (std::size_t i = 0; i < lhs.coeffs_.size(); ++i)
        for (std::size_t j = 0; j < rhs.coeffs_.size(); ++j)
            c[i + j] += lhs.coeffs_[i] * rhs.coeffs_[j];
    return Polynomial(std::move(c));
}

Polynomial operator*(double s, const Polynomial& p) {
    Polynomial r(p);
    for (auto& c : r.coeffs_) c *= s;
    r.trim();
    return r;
}

std::vector<double> real_roots(const Polynomial& p) {
    const int deg = p.degree();
    if (deg < 1) return {};
    const auto& c = p.coefficients();

    std::vector<double> roots;
    if (deg == 1) {
        roots.push_back(-c[0] / c[1]);
    } else {
        // companion matrix of the monic polynomial
        Eigen::MatrixXd comp = Eigen::MatrixXd::Zero(deg, deg);
        for (int k = 0; k < deg; ++k) comp(k, deg - 1) = -c[k] / c[deg];
        for (int k = 1; k < deg; ++k) comp(k, k - 1) = 1.0;
        Eigen::EigenSolver<Eigen::MatrixXd> es(comp, /*computeEigenvectors=*/false);
        for (int k = 0; k < deg; ++k) {
            const std::complex<double> ev = es.eigenvalues()[k];
            if (std::abs(ev.imag()) <= 1e-9 * (1.0 + std::abs(ev.real())))
                roots.push_back(ev.real());
        }
    }

    // Newton polish
    const Polynomial dp = p.derivative();
    for (double& r : roots) {
        for (int it = 0; it < 60; ++it) {
            const double f = p(r);
            const double tol = 1e-13 * (1.0 + std::pow(std::abs(r), deg));
            if (std::abs(f) <= tol) break;
            const double fp = dp(r);
            if (fp == 0.0) break;
            const double step = f / fp;
            r -= step;
            if (std::abs(step) <= 1e-16 * (1.0 + std::abs(r))) break;
        }
    }

    std::sort(roots.begin(), roots.end());
    std::vector<double> unique;
    for (double r : roots) {
        if (unique.empty() || std::abs(r - unique.back()) > 1e-8 * (1.0 + std::abs(r)))
            unique.push_back(r);
    }
    return unique;
}

}  // namespace susydec
