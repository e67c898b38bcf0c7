#pragma once
// Deterministic random source.  splitmix64 core so results are identical
// across platforms and standard-library versions; std::random engines are
// deliberately avoided.

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>

namespace opideal {

class Rng {
public:
    explicit Rng(std::uint64_t seed = 1) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    /// Uniform in [0, 1).
    double uniform() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    double uniform(double a, double b) { return a + (b - a) * uniform(); }

    /// Standard normal via Box-Muller (explicit, platform independent).
    double gaussian() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = uniform();
        double u2 = uniform();
        if (u1 < 1e-300) u1 = 1e-300;
        double r = std::sqrt(-2.0 * std::log(u1));
        double a = 6.283185307179586476925286766559 * u2;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

    Eigen::VectorXd gaussian_vector(int n) {
        Eigen::VectorXd v(n);
        for (int i = 0; i < n; ++i) v[i] = gaussian();
        return v;
    }

    /// Uniform point on the Euclidean unit sphere S^{n-1}.
    Eigen::VectorXd unit_sphere(int n) {
        Eigen::VectorXd v = gaussian_vector(n);
        double nrm = v.norm();
        if (nrm < 1e-12) {
            v.setZero();
            v[0] = 1.0;
            return v;
        }
        return v / nrm;
    }

    int index(int n) { return static_cast<int>(next_u64() % static_cast<std::uint64_t>(n)); }

    /// Independent stream for a sub-task; deterministic in (seed, tag).
    Rng derive(std::uint64_t tag) const {
        Rng r(state_ ^ (0x9e3779b97f4a7c15ULL * (tag + 0x632be59bd9b4e019ULL)));
        r.next_u64();
        return r;
    }

private:
    std::uint64_t state_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace opideal
