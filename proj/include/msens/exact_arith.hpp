#pragma once

// Exact arithmetic in Z[eps_m], eps_m a primitive m-th root of unity.
//
// Elements are stored as their canonical residue modulo the m-th cyclotomic
// polynomial Phi_m, in the basis {1, eps, ..., eps^(phi(m)-1)}. Two elements
// are equal iff their coefficient vectors are equal, so zero testing is
// structural.

#include <map>
#include <memory>
#include <mutex>
#include <ostream>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "msens/common.hpp"

namespace msens {

/// Monic integer polynomial Phi_m, coefficients from x^0 up to x^phi(m).
struct CycPolynomial {
    int m = 0;
    std::vector<long long> coeffs;

    int degree() const { return static_cast<int>(coeffs.size()) - 1; }
    bool operator==(const CycPolynomial&) const = default;
};

namespace detail {

// Exact quotient of `num` by the monic polynomial `den` (both low-to-high).
inline std::vector<long long> divide_monic(std::vector<long long> num,
                                           const std::vector<long long>& den) {
    const int dn = static_cast<int>(den.size()) - 1;
    const int nn = static_cast<int>(num.size()) - 1;
    std::vector<long long> q(nn - dn + 1, 0);
    for (int i = nn; i >= dn; --i) {
        const long long c = num[i];
        q[i - dn] = c;
        if (c == 0) continue;
        for (int j = 0; j <= dn; ++j) num[i - dn + j] -= c * den[j];
    }
    for (int i = 0; i < dn; ++i)
        if (num[i] != 0) throw std::logic_error("cyclotomic division left a remainder");
    return q;
}

inline CycPolynomial compute_cyclotomic(int m) {
    // x^m - 1 = prod_{d | m} Phi_d(x)
    std::vector<long long> num(m + 1, 0);
    num[0] = -1;
    num[m] = 1;
    for (int d = 1; d < m; ++d) {
        if (m % d != 0) continue;
        std::vector<long long> phi_d;
        if (d == 1) {
            phi_d = {-1, 1};
        } else {
            phi_d = compute_cyclotomic(d).coeffs;
        }
        num = divide_monic(std::move(num), phi_d);
    }
    return CycPolynomial{m, std::move(num)};
}

inline std::shared_ptr<const CycPolynomial> cached_cyclotomic(int m) {
    static std::mutex mutex;
    static std::map<int, std::shared_ptr<const CycPolynomial>> cache;
    std::lock_guard<std::mutex> lock(mutex);
    auto it = cache.find(m);
    if (it != cache.end()) return it->second;
    auto p = std::make_shared<const CycPolynomial>(compute_cyclotomic(m));
    cache.emplace(m, p);
    return p;
}

// Reduce raw (low-to-high) modulo the monic phi in place; result has size deg(phi).
template <class Int>
void reduce_mod_monic(std::vector<Int>& raw, const std::vector<long long>& phi) {
    const int d = static_cast<int>(phi.size()) - 1;
    for (int i = static_cast<int>(raw.size()) - 1; i >= d; --i) {
        if (raw[i] == 0) continue;
        const Int c = raw[i];
        for (int j = 0; j < d; ++j)
            if (phi[j] != 0) raw[i - d + j] -= c * phi[j];
        raw[i] = 0;
    }
    raw.resize(d, Int(0));
}

}  // namespace detail

/// Phi_m, by exact division of x^m - 1 by Phi_d over the proper divisors d of m.
inline CycPolynomial cyclotomic_polynomial(int m) {
    if (m < 2) throw InvalidParameter("cyclotomic_polynomial: m must be >= 2");
    return *detail::cached_cyclotomic(m);
}

/// Euler's totient, i.e. deg Phi_m.
inline int totient(int m) {
    int result = m;
    int r = m;
    for (int p = 2; p * p <= r; ++p) {
        if (r % p != 0) continue;
        while (r % p == 0) r /= p;
        result -= result / p;
    }
    if (r > 1) result -= result / r;
    return result;
}

/// Element of Z[eps_m] in canonical form.
class CycInt {
  public:
    CycInt() = default;

    static CycInt zero(int m) {
        CycInt r(detail::cached_cyclotomic(checked(m)));
        r.coeffs_.assign(r.phi_->degree(), BigInt(0));
        return r;
    }

    static CycInt integer(int m, const BigInt& value) {
        CycInt r = zero(m);
        r.coeffs_[0] = value;
        return r;
    }

    static CycInt one(int m) { return integer(m, 1); }

    /// eps^k for any integer k.
    static CycInt eps_power(int m, long long k) {
        std::vector<BigInt> raw(m, BigInt(0));
        raw[mod(k, m)] = 1;
        return from_raw(m, raw);
    }

    /// Canonical residue of sum raw[i] x^i modulo Phi_m, any raw length.
    static CycInt from_raw(int m, std::span<const BigInt> raw) {
        CycInt r(detail::cached_cyclotomic(checked(m)));
        r.coeffs_.assign(raw.begin(), raw.end());
        detail::reduce_mod_monic(r.coeffs_, r.phi_->coeffs);
        return r;
    }

    /// As from_raw, with machine-integer input. Exponents are first folded mod m.
    static CycInt from_group_ring(int m, std::span<const long long> raw) {
        std::vector<BigInt> folded(m, BigInt(0));
        for (std::size_t i = 0; i < raw.size(); ++i) folded[i % m] += raw[i];
        return from_raw(m, folded);
    }

    int modulus() const { return phi_ ? phi_->m : 0; }
    const std::vector<BigInt>& coeffs() const { return coeffs_; }

    bool is_zero() const {
        for (const auto& c : coeffs_)
            if (c != 0) return false;
        return true;
    }

    CycInt operator-() const {
        CycInt r = *this;
        for (auto& c : r.coeffs_) c = -c;
        return r;
    }

    CycInt& operator+=(const CycInt& o) {
        require_same(o, "add");
        for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += o.coeffs_[i];
        return *this;
    }

    CycInt& operator-=(const CycInt& o) {
        require_same(o, "subtract");
        for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] -= o.coeffs_[i];
        return *this;
    }

    CycInt& operator*=(const CycInt& o) {
        require_same(o, "multiply");
        const std::size_t d = coeffs_.size();
        std::vector<BigInt> prod(d == 0 ? 0 : 2 * d - 1, BigInt(0));
        for (std::size_t i = 0; i < d; ++i) {
            if (coeffs_[i] == 0) continue;
            for (std::size_t j = 0; j < d; ++j) prod[i + j] += coeffs_[i] * o.coeffs_[j];
        }
        detail::reduce_mod_monic(prod, phi_->coeffs);
        coeffs_ = std::move(prod);
        return *this;
    }

    CycInt& operator*=(const BigInt& k) {
        for (auto& c : coeffs_) c *= k;
        return *this;
    }

    friend CycInt operator+(CycInt a, const CycInt& b) { return a += b; }
    friend CycInt operator-(CycInt a, const CycInt& b) { return a -= b; }
    friend CycInt operator*(CycInt a, const CycInt& b) { return a *= b; }
    friend CycInt operator*(CycInt a, const BigInt& k) { return a *= k; }

    friend bool operator==(const CycInt& a, const CycInt& b) {
        return a.modulus() == b.modulus() && a.coeffs_ == b.coeffs_;
    }

    /// `(c0*e^0 + c1*e^1 + ...)`, zero terms skipped; `0` for zero.
    std::string to_string() const {
        std::ostringstream os;
        bool first = true;
        for (std::size_t i = 0; i < coeffs_.size(); ++i) {
            if (coeffs_[i] == 0) continue;
            os << (first ? "(" : " + ") << coeffs_[i] << "*e^" << i;
            first = false;
        }
        if (first) return "0";
        os << ")";
        return os.str();
    }

    friend std::ostream& operator<<(std::ostream& os, const CycInt& c) {
        return os << c.to_string();
    }

  private:
    explicit CycInt(std::shared_ptr<const CycPolynomial> phi) : phi_(std::move(phi)) {}

    static int checked(int m) {
        if (m < 2) throw InvalidParameter("CycInt: modulus must be >= 2, got " + std::to_string(m));
        return m;
    }

    void require_same(const CycInt& o, const char* op) const {
        if (modulus() != o.modulus())
            throw InvalidParameter(std::string("CycInt ") + op + ": modulus mismatch (" +
                                   std::to_string(modulus()) + " vs " +
                                   std::to_string(o.modulus()) + ")");
    }

    std::shared_ptr<const CycPolynomial> phi_;
    std::vector<BigInt> coeffs_;
};

/// Canonical form of sum raw[i] eps^i; raw must have exactly m entries.
inline CycInt cyc_reduce(int m, std::span<const BigInt> raw) {
    if (m < 2) throw InvalidParameter("cyc_reduce: m must be >= 2");
    if (static_cast<int>(raw.size()) != m)
        throw InvalidParameter("cyc_reduce: expected " + std::to_string(m) + " coefficients, got " +
                               std::to_string(raw.size()));
    return CycInt::from_raw(m, raw);
}

inline CycInt cyc_reduce(int m, std::initializer_list<long long> raw) {
    std::vector<BigInt> v(raw.begin(), raw.end());
    return cyc_reduce(m, std::span<const BigInt>(v));
}

inline bool cyc_is_zero(const CycInt& a) { return a.is_zero(); }

/// Zero test for sum raw[i] eps^i without building a CycInt (hot loops).
inline bool group_ring_is_zero(int m, std::span<const long long> raw) {
    std::vector<long long> r(raw.begin(), raw.end());
    detail::reduce_mod_monic(r, detail::cached_cyclotomic(m)->coeffs);
    for (long long c : r)
        if (c != 0) return false;
    return true;
}

}  // namespace msens
