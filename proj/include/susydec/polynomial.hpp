#pragma once

#include <initializer_list>
#include <vector>

namespace susydec {

/// Real polynomial in x; coefficient k multiplies x^k. Trailing zero
/// coefficients are trimmed so the leading coefficient is nonzero unless
/// the polynomial is identically zero (empty coefficient list).
class Polynomial {
  public:
    Polynomial() = default;
    Polynomial(std::initializer_list<double> coeffs);
    explicit Polynomial(std::vector<double> coeffs);

    static Polynomial monomial(double coeff, unsigned degree);

    const std::vector<double>& coefficients() const { return coeffs_; }
    bool is_zero() const { return coeffs_.empty(); }
    /// -1 for the zero polynomial.
    int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
    double coefficient(unsigned k) const {
        return k < coeffs_.size() ? coeffs_[k] : 0.0;
    }

    /// Horner evaluation.
    double operator()(double x) const;

    Polynomial derivative() const;

    Polynomial operator-() const;
    Polynomial& operator+=(const Polynomial& rhs);
    Polynomial& operator-=(const Polynomial& rhs);
    friend Polynomial operator+(Polynomial lhs, const Polynomial& rhs) {
        return lhs += rhs;
    }
    friend Polynomial operator-(Polynomial lhs, const Polynomial& rhs) {
        return lhs -= rhs;
    }
    friend Polynomial operator*(const Polynomial& lhs, const Polynomial& rhs);
    friend Polynomial operator*(double s, const Polynomial& p);

    friend bool operator==(const Polynomial&, const Polynomial&) = default;

  private:
    void trim();
    std::vector<double> coeffs_;
};

inline Polynomial derivative(const Polynomial& p) { return p.derivative(); }
inline double evaluate(const Polynomial& p, double x) { return p(x); }

/// All real roots, each polished by Newton iteration from companion-matrix
/// eigenvalues. Eigenvalues with relative imaginary part above
/// 1e-9*(1+|root|) are discarded; near-duplicate roots are merged.
/// Returns roots sorted ascending. Zero or constant polynomials have none.
std::vector<double> real_roots(const Polynomial& p);

}  // namespace susydec
