#pragma once

// Test-only reference computations. These deliberately avoid the library's
// simulation path: the reference simulator tracks cohorts by cumulative spend
// instead of per-drone batteries, and the equilibrium root comes from
// bisection on the population balance N * E(N) = births * capacity.

#include <cmath>
#include <cstddef>
#include <optional>
#include <vector>

namespace oracle {

enum class Arch { Centralized, Hierarchical, Holonic, Adaptive };

struct Params {
    double k_o = 10, k_ce = 5, k_hi = 3, k_ho = 1, capacity = 700;
    std::size_t hier_min = 14, holonic_min = 42, births = 2;
};

inline Arch pick(Arch a, std::size_t n, const Params& p) {
    if (a != Arch::Adaptive) return a;
    if (n < p.hier_min) return Arch::Centralized;
    if (n < p.holonic_min) return Arch::Hierarchical;
    return Arch::Holonic;
}

inline double energy(Arch a, std::size_t n, const Params& p) {
    switch (a) {
        case Arch::Centralized: return p.k_o + p.k_ce * double(n);
        case Arch::Hierarchical: return n >= p.hier_min ? p.k_o + p.k_hi * std::sqrt(double(n)) : p.k_o;
        case Arch::Holonic: return n >= p.holonic_min ? p.k_o + p.k_ho : p.k_o;
        default: return 0;
    }
}

// Communication term above the formation minimum, as a continuous function of N.
inline double formed_energy(Arch a, double n, const Params& p) {
    switch (a) {
        case Arch::Centralized: return p.k_o + p.k_ce * n;
        case Arch::Hierarchical: return p.k_o + p.k_hi * std::sqrt(n);
        case Arch::Holonic: return p.k_o + p.k_ho;
        default: return 0;
    }
}

// Root of N * E(N) = births * capacity by bisection.
inline double equilibrium_root(Arch a, const Params& p = {}) {
    const double target = double(p.births) * p.capacity;
    double lo = 0.0, hi = 1.0;
    while (hi * formed_energy(a, hi, p) < target) hi *= 2.0;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (mid * formed_energy(a, mid, p) < target) lo = mid; else hi = mid;
    }
    return 0.5 * (lo + hi);
}

struct Row {
    std::size_t size_after = 0;  // survivors
    std::size_t charged = 0;
    Arch arch = Arch::Centralized;
    double per_drone = 0;
    double total = 0;
    std::size_t depleted = 0;
};

// Cohort bookkeeping: every drone in a cohort was born in the same iteration
// and has spent the same cumulative energy.
inline std::vector<Row> reference_run(Arch mode, std::size_t iterations, const Params& p = {},
                                      std::size_t initial = 0) {
    struct Cohort { std::size_t count; double spent; };
    std::vector<Cohort> cohorts;
    if (initial > 0) cohorts.push_back({initial, 0.0});
    std::vector<Row> rows;
    for (std::size_t it = 0; it < iterations; ++it) {
        cohorts.push_back({p.births, 0.0});
        std::size_t n = 0;
        for (const auto& c : cohorts) n += c.count;
        Row r;
        r.charged = n;
        r.arch = pick(mode, n, p);
        r.per_drone = energy(r.arch, n, p);
        r.total = r.per_drone * double(n);
        std::vector<Cohort> alive;
        for (auto c : cohorts) {
            c.spent += r.per_drone;
            if (p.capacity - c.spent <= 0.0) r.depleted += c.count; else alive.push_back(c);
        }
        cohorts = std::move(alive);
        for (const auto& c : cohorts) r.size_after += c.count;
        rows.push_back(r);
    }
    return rows;
}

}  // namespace oracle
