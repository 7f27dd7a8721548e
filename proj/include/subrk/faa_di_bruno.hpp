#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "subrk/errors.hpp"

namespace subrk {

using BigInt = boost::multiprecision::cpp_int;

struct MultiIndex {
    std::vector<int> entries;  // alpha_1 .. alpha_n

    int order() const { return static_cast<int>(entries.size()); }
    int weighted() const;  // sum k * alpha_k
    int size() const;      // |alpha|
    int odd() const;       // sum of alpha_k over odd k
    int even() const;      // sum of alpha_k over even k

    friend bool operator==(const MultiIndex&, const MultiIndex&) = default;
};

// Precomputed data for one order n: the index set, exact coefficients and a
// sparse (j, alpha_j) form used by the evaluator.
struct FaaTable {
    int n = 0;
    std::vector<MultiIndex> indices;
    std::vector<BigInt> coeffs;
    std::vector<double> coeffs_f;
    std::vector<int> sizes;
    std::vector<std::vector<std::pair<int, int>>> factors;
};

const FaaTable& faa_table(int n);
const std::vector<MultiIndex>& multi_indices(int n);
BigInt faa_coefficient(const MultiIndex& alpha, int n);
BigInt bell_number(int n);

// d^k/dx^k f(g(x)) for k = 0..n, from outer[m] = f^(m)(g(x)) (m = 0..n) and
// inner[j-1] = g^(j)(x) (j = 1..n).
template <class T>
std::vector<T> composite_derivs(std::span<const T> outer, std::span<const T> inner, int n) {
    if (n < 0) throw UsageError("composite_derivs: negative order");
    if (outer.size() < static_cast<std::size_t>(n) + 1 || inner.size() < static_cast<std::size_t>(n))
        throw UsageError("composite_derivs: length mismatch");
    std::vector<T> out(n + 1, T(0));
    out[0] = outer[0];
    std::vector<T> pw;
    for (int k = 1; k <= n; ++k) {
        const FaaTable& tab = faa_table(k);
        T acc(0);
        for (std::size_t a = 0; a < tab.indices.size(); ++a) {
            T term = outer[tab.sizes[a]];
            for (auto [j, e] : tab.factors[a]) {
                T g = inner[j - 1];
                T p = g;
                for (int q = 1; q < e; ++q) p *= g;
                term *= p;
            }
            acc += tab.coeffs_f[a] * term;
        }
        out[k] = acc;
    }
    return out;
}

template <class T>
std::vector<T> composite_derivs(const std::vector<T>& outer, const std::vector<T>& inner, int n) {
    return composite_derivs<T>(std::span<const T>(outer), std::span<const T>(inner), n);
}

}  // namespace subrk
