#include "subrk/faa_di_bruno.hpp"

#include <map>
#include <memory>
#include <mutex>

namespace subrk {

namespace {

constexpr int kPrecomputed = 24;

void enumerate(int n, int k, int remaining, std::vector<int>& cur, std::vector<MultiIndex>& out) {
    // cur holds alpha_1..alpha_{k-1}; choose alpha_k from largest to smallest.
    if (k > n) {
        if (remaining == 0) out.push_back({cur});
        return;
    }
    for (int a = remaining / k; a >= 0; --a) {
        cur[k - 1] = a;
        enumerate(n, k + 1, remaining - a * k, cur, out);
    }
    cur[k - 1] = 0;
}

BigInt factorial(int n) {
    BigInt f = 1;
    for (int i = 2; i <= n; ++i) f *= i;
    return f;
}

BigInt coefficient(const MultiIndex& alpha) {
    const int n = alpha.order();
    BigInt den = 1;
    for (int k = 1; k <= n; ++k) {
        const int a = alpha.entries[k - 1];
        if (a == 0) continue;
        den *= factorial(a);
        BigInt fk = factorial(k);
        for (int i = 0; i < a; ++i) den *= fk;
    }
    return factorial(n) / den;
}

std::unique_ptr<FaaTable> build(int n) {
    auto tab = std::make_unique<FaaTable>();
    tab->n = n;
    if (n > 0) {
        std::vector<int> cur(n, 0);
        enumerate(n, 1, n, cur, tab->indices);
    }
    for (const auto& a : tab->indices) {
        tab->coeffs.push_back(coefficient(a));
        tab->coeffs_f.push_back(tab->coeffs.back().convert_to<double>());
        tab->sizes.push_back(a.size());
        std::vector<std::pair<int, int>> f;
        for (int k = 1; k <= n; ++k)
            if (a.entries[k - 1]) f.emplace_back(k, a.entries[k - 1]);
        tab->factors.push_back(std::move(f));
    }
    return tab;
}

}  // namespace

int MultiIndex::weighted() const {
    int s = 0;
    for (std::size_t k = 0; k < entries.size(); ++k) s += static_cast<int>(k + 1) * entries[k];
    return s;
}

int MultiIndex::size() const {
    int s = 0;
    for (int a : entries) s += a;
    return s;
}

int MultiIndex::odd() const {
    int s = 0;
    for (std::size_t k = 0; k < entries.size(); k += 2) s += entries[k];
    return s;
}

int MultiIndex::even() const {
    int s = 0;
    for (std::size_t k = 1; k < entries.size(); k += 2) s += entries[k];
    return s;
}

const FaaTable& faa_table(int n) {
    if (n < 0) throw UsageError("faa_table: negative order");
    static const std::vector<std::unique_ptr<FaaTable>> pre = [] {
        std::vector<std::unique_ptr<FaaTable>> v;
        for (int k = 0; k <= kPrecomputed; ++k) v.push_back(build(k));
        return v;
    }();
    if (n <= kPrecomputed) return *pre[n];
    static std::mutex mu;
    static std::map<int, std::unique_ptr<FaaTable>> extra;
    std::lock_guard lock(mu);
    auto& slot = extra[n];
    if (!slot) slot = build(n);
    return *slot;
}

const std::vector<MultiIndex>& multi_indices(int n) { return faa_table(n).indices; }

BigInt faa_coefficient(const MultiIndex& alpha, int n) {
    if (alpha.order() != n || alpha.weighted() != n)
        throw Error(ErrorCode::domain, "faa_coefficient: multi-index is not in J_n");
    for (int a : alpha.entries)
        if (a < 0) throw Error(ErrorCode::domain, "faa_coefficient: negative entry");
    return coefficient(alpha);
}

BigInt bell_number(int n) {
    if (n == 0) return 1;
    BigInt s = 0;
    for (const auto& c : faa_table(n).coeffs) s += c;
    return s;
}

}  // namespace subrk
