#pragma once

#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace msens {

using BigInt = boost::multiprecision::cpp_int;
using BigRational = boost::multiprecision::cpp_rational;

/// A vertex of H(n,m): coordinate labels in [0,m-1], coordinate 0 first.
using Vertex = std::vector<int>;

/// Bad argument to an operation (out-of-range label, mismatched modulus, ...).
class InvalidParameter : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

/// Requested exhaustive work exceeds a configured limit.
class CapacityExceeded : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// A file could not be opened or written.
class IoError : public std::runtime_error {
  public:
    IoError(const std::string& path, const std::string& what) : std::runtime_error(path + ": " + what) {}
};

/// Malformed input file. Carries the 1-based line and column.
class ParseError : public std::runtime_error {
  public:
    ParseError(const std::string& source, std::size_t line, std::size_t position,
               const std::string& what)
        : std::runtime_error(source + ":" + std::to_string(line) + ":" +
                             std::to_string(position) + ": " + what),
          line_(line),
          position_(position) {}

    std::size_t line() const noexcept { return line_; }
    std::size_t position() const noexcept { return position_; }

  private:
    std::size_t line_;
    std::size_t position_;
};

/// Capacity limits shared by every exhaustive operation.
struct Limits {
    std::uint64_t max_dense = std::uint64_t{1} << 24;  // largest m^n tabulated
    int max_bitmask_n = 16;                           // largest n for block sensitivity
    std::uint64_t function_budget = 10'000'000;       // table entries touched by enumerations
};

/// m^n, or nullopt-like sentinel 0 when it overflows 64 bits.
inline std::uint64_t checked_pow(std::uint64_t base, int exp) {
    std::uint64_t r = 1;
    for (int i = 0; i < exp; ++i) {
        if (base != 0 && r > std::numeric_limits<std::uint64_t>::max() / base) return 0;
        r *= base;
    }
    return r;
}

/// m^n with a capacity check against `limit`.
inline std::uint64_t dense_size(int m, int n, std::uint64_t limit, const char* what) {
    const std::uint64_t size = checked_pow(static_cast<std::uint64_t>(m), n);
    if (size == 0 || size > limit) {
        throw CapacityExceeded(std::string(what) + ": m^n = " + std::to_string(m) + "^" +
                               std::to_string(n) + " exceeds the dense limit " +
                               std::to_string(limit));
    }
    return size;
}

inline BigInt big_pow(const BigInt& base, unsigned exp) {
    return boost::multiprecision::pow(base, exp);
}

inline bool is_prime(std::uint64_t p) {
    if (p < 2) return false;
    for (std::uint64_t d = 2; d * d <= p; ++d)
        if (p % d == 0) return false;
    return true;
}

inline int mod(long long a, int m) {
    const long long r = a % m;
    return static_cast<int>(r < 0 ? r + m : r);
}

inline void check_modulus(int m) {
    if (m < 2) throw InvalidParameter("alphabet size m must be >= 2, got " + std::to_string(m));
    if (m > 255) throw InvalidParameter("alphabet size m must be <= 255, got " + std::to_string(m));
}

/// True for lines that text readers skip: blank, or starting with '#'.
inline bool skippable_line(const std::string& line) {
    const auto first = line.find_first_not_of(" \t\r");
    return first == std::string::npos || line[first] == '#';
}

}  // namespace msens
