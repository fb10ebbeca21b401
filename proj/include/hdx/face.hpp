#pragma once

#include <algorithm>
#include <cstdint>
#include <string>
#include <vector>

namespace hdx {

/// A face is a strictly increasing list of vertex ids. The empty face is X(0)'s
/// single element.
using Face = std::vector<int>;

inline bool is_canonical(const Face& f) {
    for (std::size_t i = 1; i < f.size(); ++i)
        if (f[i - 1] >= f[i]) return false;
    return f.empty() || f.front() >= 0;
}

inline Face canonical(Face f) {
    std::sort(f.begin(), f.end());
    f.erase(std::unique(f.begin(), f.end()), f.end());
    return f;
}

inline bool contains(const Face& big, const Face& small) {
    return std::includes(big.begin(), big.end(), small.begin(), small.end());
}

inline Face face_union(const Face& a, const Face& b) {
    Face out;
    out.reserve(a.size() + b.size());
    std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

inline Face face_difference(const Face& a, const Face& b) {
    Face out;
    out.reserve(a.size());
    std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

inline int intersection_size(const Face& a, const Face& b) {
    int c = 0;
    auto ia = a.begin();
    auto ib = b.begin();
    while (ia != a.end() && ib != b.end()) {
        if (*ia < *ib) ++ia;
        else if (*ib < *ia) ++ib;
        else { ++c; ++ia; ++ib; }
    }
    return c;
}

inline std::string face_to_string(const Face& f) {
    std::string s = "{";
    for (std::size_t i = 0; i < f.size(); ++i) {
        if (i) s += ",";
        s += std::to_string(f[i]);
    }
    return s + "}";
}

inline double binomial(int n, int k) {
    if (k < 0 || k > n) return 0.0;
    k = std::min(k, n - k);
    double r = 1.0;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

/// Visit every k-subset of `items` in lexicographic order.
template <typename Fn>
void for_each_subset(const std::vector<int>& items, int k, Fn&& fn) {
    const int n = static_cast<int>(items.size());
    if (k < 0 || k > n) return;
    std::vector<int> idx(k);
    for (int i = 0; i < k; ++i) idx[i] = i;
    Face buf(k);
    while (true) {
        for (int i = 0; i < k; ++i) buf[i] = items[idx[i]];
        fn(buf);
        int i = k - 1;
        while (i >= 0 && idx[i] == n - k + i) --i;
        if (i < 0) break;
        ++idx[i];
        for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
    }
}

} // namespace hdx
