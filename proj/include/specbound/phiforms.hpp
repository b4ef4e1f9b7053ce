#ifndef SPECBOUND_PHIFORMS_HPP
#define SPECBOUND_PHIFORMS_HPP

// Exact algebra of monomial phi-forms: products of derivative ratios
// phi^(j+1)/phi' graded by degree (sum of orders) and bidegree (number of
// factors), with polynomial coefficients in one formal parameter over exact
// rationals. Hosts the Psi / Omega / Phi_k families and the formal
// z-derivative. No floating point enters the algebra; numeric evaluation
// happens only at the boundary (eval_* helpers).

#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <complex>
#include <cstdint>
#include <map>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace specbound::forms {

using Rational = boost::multiprecision::cpp_rational;

inline Rational factorial(int n) {
    Rational r = 1;
    for (int i = 2; i <= n; ++i) r *= i;
    return r;
}

/// Product phi^(j_1+1) ... phi^(j_n+1) / (phi')^n keyed by the nondecreasing
/// order tuple (j_1 <= ... <= j_n), j_i >= 1.
struct Monomial {
    std::vector<int> orders;

    static Monomial of(std::vector<int> js) {
        for (int j : js)
            if (j < 1) throw std::invalid_argument("Monomial: orders must be >= 1");
        std::sort(js.begin(), js.end());
        return Monomial{std::move(js)};
    }
    int degree() const { return std::accumulate(orders.begin(), orders.end(), 0); }
    int bidegree() const { return static_cast<int>(orders.size()); }
    auto operator<=>(const Monomial&) const = default;

    Monomial concat(const Monomial& o) const {
        std::vector<int> js = orders;
        js.insert(js.end(), o.orders.begin(), o.orders.end());
        std::sort(js.begin(), js.end());
        return Monomial{std::move(js)};
    }
};

/// Polynomial in one formal variable with exact rational coefficients.
class CoeffPoly {
public:
    CoeffPoly() = default;
    explicit CoeffPoly(Rational constant) {
        if (constant != 0) c_ = {std::move(constant)};
    }
    static CoeffPoly variable() { return CoeffPoly(std::vector<Rational>{0, 1}); }
    static CoeffPoly one() { return CoeffPoly(Rational(1)); }

    bool is_zero() const { return c_.empty(); }
    int degree() const { return c_.empty() ? -1 : static_cast<int>(c_.size()) - 1; }
    Rational coeff(int k) const {
        return (k >= 0 && k < static_cast<int>(c_.size())) ? c_[k] : Rational(0);
    }

    CoeffPoly& operator+=(const CoeffPoly& o) {
        if (o.c_.size() > c_.size()) c_.resize(o.c_.size());
        for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] += o.c_[i];
        trim();
        return *this;
    }
    CoeffPoly operator+(const CoeffPoly& o) const { CoeffPoly r = *this; r += o; return r; }
    CoeffPoly operator-() const {
        CoeffPoly r = *this;
        for (auto& c : r.c_) c = -c;
        return r;
    }
    CoeffPoly operator-(const CoeffPoly& o) const { return *this + (-o); }
    CoeffPoly operator*(const CoeffPoly& o) const {
        if (is_zero() || o.is_zero()) return {};
        std::vector<Rational> p(c_.size() + o.c_.size() - 1, Rational(0));
        for (std::size_t i = 0; i < c_.size(); ++i)
            for (std::size_t j = 0; j < o.c_.size(); ++j) p[i + j] += c_[i] * o.c_[j];
        CoeffPoly r(std::move(p));
        r.trim();
        return r;
    }
    CoeffPoly operator*(const Rational& q) const {
        if (q == 0) return {};
        CoeffPoly r = *this;
        for (auto& c : r.c_) c *= q;
        return r;
    }
    bool operator==(const CoeffPoly&) const = default;

    double eval(double x) const {
        double v = 0.0;
        for (std::size_t i = c_.size(); i-- > 0;) v = v * x + c_[i].convert_to<double>();
        return v;
    }
    std::complex<double> eval(std::complex<double> x) const {
        std::complex<double> v = 0.0;
        for (std::size_t i = c_.size(); i-- > 0;) v = v * x + c_[i].convert_to<double>();
        return v;
    }

    std::string str(const std::string& var) const {
        if (c_.empty()) return "0";
        std::ostringstream os;
        bool first = true;
        for (std::size_t i = 0; i < c_.size(); ++i) {
            if (c_[i] == 0) continue;
            Rational a = c_[i];
            if (first) {
                if (a < 0) { os << "-"; a = -a; }
            } else {
                os << (a < 0 ? " - " : " + ");
                if (a < 0) a = -a;
            }
            first = false;
            const bool unit = (a == 1) && i > 0;
            if (!unit) os << a;
            if (i >= 1) {
                if (!unit) os << " ";
                os << var;
                if (i >= 2) os << "^" << i;
            }
        }
        return os.str();
    }

private:
    explicit CoeffPoly(std::vector<Rational> c) : c_(std::move(c)) {}
    void trim() {
        while (!c_.empty() && c_.back() == 0) c_.pop_back();
    }
    std::vector<Rational> c_;
};

/// (x + s)(x + s + 1) ... (x + s + n - 1) as a polynomial in the formal x.
inline CoeffPoly rising_from(const Rational& s, int n) {
    CoeffPoly p = CoeffPoly::one();
    for (int i = 0; i < n; ++i) p = p * (CoeffPoly::variable() + CoeffPoly(s + i));
    return p;
}

/// Finite linear combination of monomials with CoeffPoly coefficients.
class PhiForm {
public:
    PhiForm() = default;

    static PhiForm term(Monomial m, CoeffPoly c) {
        PhiForm f;
        if (!c.is_zero()) f.terms_.emplace(std::move(m), std::move(c));
        return f;
    }

    const std::map<Monomial, CoeffPoly>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    CoeffPoly coeff(const Monomial& m) const {
        const auto it = terms_.find(m);
        return it == terms_.end() ? CoeffPoly{} : it->second;
    }

    void add_term(const Monomial& m, const CoeffPoly& c) {
        if (c.is_zero()) return;
        auto [it, inserted] = terms_.emplace(m, c);
        if (!inserted) {
            it->second += c;
            if (it->second.is_zero()) terms_.erase(it);
        }
    }

    PhiForm& operator+=(const PhiForm& o) {
        for (const auto& [m, c] : o.terms_) add_term(m, c);
        return *this;
    }
    PhiForm operator+(const PhiForm& o) const { PhiForm r = *this; r += o; return r; }
    PhiForm operator-(const PhiForm& o) const { return *this + o.scaled(Rational(-1)); }

    PhiForm scaled(const Rational& q) const {
        PhiForm r;
        if (q == 0) return r;
        for (const auto& [m, c] : terms_) r.terms_.emplace(m, c * q);
        return r;
    }
    PhiForm scaled(const CoeffPoly& p) const {
        PhiForm r;
        for (const auto& [m, c] : terms_) {
            const CoeffPoly pc = c * p;
            if (!pc.is_zero()) r.terms_.emplace(m, pc);
        }
        return r;
    }

    PhiForm operator*(const PhiForm& o) const {
        PhiForm r;
        for (const auto& [m1, c1] : terms_)
            for (const auto& [m2, c2] : o.terms_) r.add_term(m1.concat(m2), c1 * c2);
        return r;
    }

    bool operator==(const PhiForm&) const = default;

    int degree() const {
        int d = 0;
        for (const auto& [m, c] : terms_) d = std::max(d, m.degree());
        return d;
    }

private:
    std::map<Monomial, CoeffPoly> terms_;
};

/// Formal z-derivative: d/dz [phi^(j+1)/phi'] = phi^(j+2)/phi' - (phi''/phi') phi^(j+1)/phi',
/// applied monomial-wise by the product rule. Raises degree by exactly one.
inline PhiForm differentiate_form(const PhiForm& f) {
    PhiForm out;
    for (const auto& [m, c] : f.terms()) {
        // bump each distinct order once per multiplicity
        for (std::size_t i = 0; i < m.orders.size(); ++i) {
            if (i > 0 && m.orders[i] == m.orders[i - 1]) continue;  // handled with multiplicity
            const int mult = static_cast<int>(std::count(m.orders.begin(), m.orders.end(), m.orders[i]));
            std::vector<int> js = m.orders;
            js[i] += 1;
            out.add_term(Monomial::of(std::move(js)), c * Rational(mult));
        }
        // the -(n) (phi''/phi') * m term from the (phi')^{-n} factor
        std::vector<int> js = m.orders;
        js.push_back(1);
        out.add_term(Monomial::of(std::move(js)), c * Rational(-m.bidegree()));
    }
    return out;
}

/// Psi_{k,n}: sum over all n-tuples of positive integers summing to k of the
/// corresponding monomial with coefficient 1/((j_1+1)! ... (j_n+1)!).
inline PhiForm psi_form(int k, int n) {
    if (n < 1 || n > k) throw std::domain_error("psi_form: requires 1 <= n <= k");
    PhiForm out;
    // enumerate partitions of k into n nondecreasing positive parts, tracking
    // the number of distinct compositions each partition represents
    std::vector<int> part(n, 0);
    auto rec = [&](auto&& self, int pos, int remaining, int minv) -> void {
        if (pos == n) {
            if (remaining != 0) return;
            Rational coeff = 1;
            for (int j : part) coeff /= factorial(j + 1);
            // distinct permutations: n! / prod (multiplicity!)
            Rational perms = factorial(n);
            int run = 1;
            for (int i = 1; i <= n; ++i) {
                if (i < n && part[i] == part[i - 1]) {
                    ++run;
                } else {
                    perms /= factorial(run);
                    run = 1;
                }
            }
            out.add_term(Monomial::of(part), CoeffPoly(coeff * perms));
            return;
        }
        for (int v = minv; v * (n - pos) <= remaining; ++v) {
            part[pos] = v;
            self(self, pos + 1, remaining - v, v);
        }
    };
    rec(rec, 0, k, 1);
    return out;
}

namespace detail {

/// c(j_1,...,j_n) of the closed-form Omega representation, defined by
/// c(1) = 1, the zero-padding rule c(j_1,...,j_{n-1},0) = c(j_1,...,j_{n-1})/n
/// and the permutation-averaged decrement recursion. Permutation-invariant by
/// construction; memoized on the sorted tuple.
inline Rational c_coefficient_impl(std::vector<int> sorted,
                                   std::map<std::vector<int>, Rational>& memo) {
    if (sorted.empty()) return 1;
    if (sorted.front() == 0) {
        // exactly one zero can appear; drop it and divide by the full length
        std::vector<int> rest(sorted.begin() + 1, sorted.end());
        return c_coefficient_impl(std::move(rest), memo) / int(sorted.size());
    }
    if (sorted.size() == 1 && sorted[0] == 1) return 1;
    if (const auto it = memo.find(sorted); it != memo.end()) return it->second;

    Rational sum = 0;
    long perms = 0;
    std::vector<int> perm = sorted;
    do {
        ++perms;
        std::vector<int> next = perm;
        next.back() -= 1;
        std::sort(next.begin(), next.end());
        sum += c_coefficient_impl(std::move(next), memo);
    } while (std::next_permutation(perm.begin(), perm.end()));

    Rational result = sum * int(sorted.size()) / perms;
    memo.emplace(std::move(sorted), result);
    return result;
}

}  // namespace detail

inline Rational c_coefficient(std::vector<int> orders) {
    for (int j : orders)
        if (j < 1) throw std::invalid_argument("c_coefficient: orders must be positive");
    std::sort(orders.begin(), orders.end());
    static thread_local std::map<std::vector<int>, Rational> memo;
    return detail::c_coefficient_impl(std::move(orders), memo);
}

/// Omega_{k,lambda} via the derivative recursion
/// Omega_{k+1} = Omega_k' + lambda (phi''/phi') Omega_k, Omega_1 = lambda phi''/phi'.
/// Coefficient polynomials live in the formal variable lambda.
inline PhiForm omega_form(int k) {
    if (k < 1) throw std::domain_error("omega_form: k >= 1 required");
    PhiForm om = PhiForm::term(Monomial::of({1}), CoeffPoly::variable());
    const PhiForm phi2ratio = PhiForm::term(Monomial::of({1}), CoeffPoly::one());
    for (int i = 1; i < k; ++i)
        om = differentiate_form(om) + (phi2ratio * om).scaled(CoeffPoly::variable());
    return om;
}

/// The closed form of Omega_{k,lambda}: sum over n and order tuples of
/// (lambda-n+1)_n c(j_1,...,j_n) times the monomial. Must agree exactly with
/// omega_form; kept separate as the cross-check of the c recursion.
inline PhiForm omega_form_closed(int k) {
    if (k < 1) throw std::domain_error("omega_form_closed: k >= 1 required");
    PhiForm out;
    for (int n = 1; n <= k; ++n) {
        const CoeffPoly rising = rising_from(Rational(1 - n), n);  // (lambda-n+1)_n
        std::vector<int> part(n, 0);
        auto rec = [&](auto&& self, int pos, int remaining, int minv) -> void {
            if (pos == n) {
                if (remaining != 0) return;
                Rational perms = factorial(n);
                int run = 1;
                for (int i = 1; i <= n; ++i) {
                    if (i < n && part[i] == part[i - 1]) {
                        ++run;
                    } else {
                        perms /= factorial(run);
                        run = 1;
                    }
                }
                out.add_term(Monomial::of(part), rising * (c_coefficient(part) * perms));
                return;
            }
            for (int v = minv; v * (n - pos) <= remaining; ++v) {
                part[pos] = v;
                self(self, pos + 1, remaining - v, v);
            }
        };
        rec(rec, 0, k, 1);
    }
    return out;
}

/// Phi_{k,theta} = (k+1-theta) k! sum_{n=1}^{k+1} (-1)^{n-1} (theta+1)_{n-1}/n! Psi_{k+1,n}.
/// Coefficient polynomials live in the formal variable theta; degree k+1.
inline PhiForm phi_k_form(int k) {
    if (k < 0) throw std::domain_error("phi_k_form: k >= 0 required");
    const CoeffPoly front = (CoeffPoly(Rational(k + 1)) - CoeffPoly::variable()) * factorial(k);
    PhiForm sum;
    for (int n = 1; n <= k + 1; ++n) {
        CoeffPoly c = rising_from(Rational(1), n - 1);  // (theta+1)_{n-1}
        c = c * (Rational((n % 2 == 1) ? 1 : -1) / factorial(n));
        sum += psi_form(k + 1, n).scaled(c);
    }
    return sum.scaled(front);
}

/// Render a form in derivative-ratio notation, e.g.
/// "(1/3 - 1/6 th) phi'''/phi' + (-1/4 - 1/8 th + 1/8 th^2) (phi''/phi')^2".
inline std::string to_string(const PhiForm& f, const std::string& var = "th") {
    if (f.is_zero()) return "0";
    auto deriv = [](int order) {
        // order j stands for phi^(j+1)
        std::string s = "phi";
        if (order + 1 <= 4) {
            for (int i = 0; i < order + 1; ++i) s += '\'';
        } else {
            s += "^(" + std::to_string(order + 1) + ")";
        }
        return s;
    };
    std::vector<const std::pair<const Monomial, CoeffPoly>*> ordered;
    for (const auto& t : f.terms()) ordered.push_back(&t);
    std::sort(ordered.begin(), ordered.end(), [](const auto* a, const auto* b) {
        if (a->first.bidegree() != b->first.bidegree())
            return a->first.bidegree() < b->first.bidegree();
        return a->first < b->first;
    });
    std::ostringstream os;
    bool first = true;
    for (const auto* tp : ordered) {
        const auto& [m, c] = *tp;
        if (!first) os << " + ";
        first = false;
        os << "(" << c.str(var) << ") ";
        if (m.orders.size() == 1) {
            os << deriv(m.orders[0]) << "/phi'";
        } else if (std::all_of(m.orders.begin(), m.orders.end(),
                               [&](int j) { return j == m.orders[0]; })) {
            os << "(" << deriv(m.orders[0]) << "/phi')^" << m.orders.size();
        } else {
            for (auto it = m.orders.rbegin(); it != m.orders.rend(); ++it) {
                if (it != m.orders.rbegin()) os << " ";
                os << deriv(*it);
            }
            os << "/phi'^" << m.orders.size();
        }
    }
    return os.str();
}

/// Numeric evaluation at a parameter value and derivative ratios
/// ratios[j-1] = phi^(j+1)(z)/phi'(z). Boundary helper; the algebra itself
/// stays exact.
inline std::complex<double> eval_form(const PhiForm& f, std::complex<double> param,
                                      const std::vector<std::complex<double>>& ratios) {
    std::complex<double> v = 0.0;
    for (const auto& [m, c] : f.terms()) {
        std::complex<double> mono = 1.0;
        for (int j : m.orders) {
            if (j - 1 >= static_cast<int>(ratios.size()))
                throw std::out_of_range("eval_form: not enough derivative ratios");
            mono *= ratios[j - 1];
        }
        v += c.eval(param) * mono;
    }
    return v;
}

}  // namespace specbound::forms

#endif  // SPECBOUND_PHIFORMS_HPP
