#pragma once

// Reference implementations used to cross-check the library. They are
// deliberately naive and share no code with src/.

#include <cmath>
#include <cstddef>
#include <map>
#include <random>
#include <string>
#include <utility>
#include <vector>

namespace oracle {

using Matrix = std::vector<std::vector<double>>;

inline std::vector<double> mean_row(const Matrix& u, const std::vector<double>* w = nullptr) {
    std::vector<double> m(u.front().size(), 0.0);
    for (std::size_t i = 0; i < u.size(); ++i) {
        const double wi = w ? (*w)[i] : 1.0 / static_cast<double>(u.size());
        for (std::size_t k = 0; k < m.size(); ++k) m[k] += wi * u[i][k];
    }
    return m;
}

inline double l1(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0;
    for (std::size_t k = 0; k < a.size(); ++k) s += std::fabs(a[k] - b[k]);
    return s;
}

inline double rds(const Matrix& u) {
    const auto c = mean_row(u);
    double s = 0;
    for (const auto& r : u) s += l1(r, c);
    return s;
}

inline double rds_weighted(const Matrix& u, const std::vector<double>& p) {
    const auto c = mean_row(u, &p);
    double s = 0;
    for (std::size_t i = 0; i < u.size(); ++i) s += p[i] * l1(u[i], c);
    return s;
}

/// AUROC by counting every (incorrect, correct) pair. Returns -1 if a class
/// is empty.
inline double auroc_pairs(const std::vector<double>& score, const std::vector<bool>& correct) {
    double wins = 0;
    double pairs = 0;
    for (std::size_t i = 0; i < score.size(); ++i) {
        if (correct[i]) continue;
        for (std::size_t j = 0; j < score.size(); ++j) {
            if (!correct[j]) continue;
            pairs += 1;
            if (score[i] > score[j]) wins += 1;
            else if (score[i] == score[j]) wins += 0.5;
        }
    }
    return pairs == 0 ? -1.0 : wins / pairs;
}

/// LCS length by memoized recursion on suffixes.
class Lcs {
public:
    Lcs(const std::vector<std::string>& a, const std::vector<std::string>& b) : a_(a), b_(b) {}

    std::size_t length() { return go(0, 0); }

private:
    std::size_t go(std::size_t i, std::size_t j) {
        if (i == a_.size() || j == b_.size()) return 0;
        const auto key = std::make_pair(i, j);
        if (auto it = memo_.find(key); it != memo_.end()) return it->second;
        std::size_t r;
        if (a_[i] == b_[j]) r = 1 + go(i + 1, j + 1);
        else r = std::max(go(i + 1, j), go(i, j + 1));
        memo_[key] = r;
        return r;
    }

    const std::vector<std::string>& a_;
    const std::vector<std::string>& b_;
    std::map<std::pair<std::size_t, std::size_t>, std::size_t> memo_;
};

inline double rouge_f1_tokens(const std::vector<std::string>& cand, const std::vector<std::string>& ref) {
    if (cand.empty() || ref.empty()) return 0.0;
    const double l = static_cast<double>(Lcs(cand, ref).length());
    if (l == 0) return 0.0;
    const double p = l / static_cast<double>(cand.size());
    const double r = l / static_cast<double>(ref.size());
    return 2 * p * r / (p + r);
}

// ---------------------------------------------------------------- generators

inline std::vector<double> random_unit(std::mt19937_64& g, std::size_t dim) {
    std::normal_distribution<double> nd;
    for (;;) {
        std::vector<double> v(dim);
        double n2 = 0;
        for (auto& x : v) {
            x = nd(g);
            n2 += x * x;
        }
        if (n2 < 1e-12) continue;
        const double n = std::sqrt(n2);
        for (auto& x : v) x /= n;
        return v;
    }
}

/// Random unit rows; shape varies between isotropic, clustered and
/// antipodal sets so both small and saturated dispersion get exercised.
inline Matrix random_set(std::mt19937_64& g, std::size_t n, std::size_t dim) {
    std::uniform_int_distribution<int> kind(0, 2);
    std::normal_distribution<double> nd;
    const int k = kind(g);
    const auto base = random_unit(g, dim);
    const double spread = std::uniform_real_distribution<double>(0.01, 0.5)(g);
    Matrix u;
    for (std::size_t i = 0; i < n; ++i) {
        if (k == 0) {
            u.push_back(random_unit(g, dim));
            continue;
        }
        std::vector<double> v = base;
        if (k == 2 && i % 2) for (auto& x : v) x = -x;
        double n2 = 0;
        for (auto& x : v) {
            x += spread * nd(g);
            n2 += x * x;
        }
        for (auto& x : v) x /= std::sqrt(n2);
        u.push_back(std::move(v));
    }
    return u;
}

inline std::vector<double> random_simplex(std::mt19937_64& g, std::size_t n) {
    std::exponential_distribution<double> ex(1.0);
    std::vector<double> p(n);
    double s = 0;
    for (auto& x : p) s += (x = ex(g));
    for (auto& x : p) x /= s;
    return p;
}

inline std::vector<double> flatten(const Matrix& u) {
    std::vector<double> f;
    for (const auto& r : u) f.insert(f.end(), r.begin(), r.end());
    return f;
}

} // namespace oracle
