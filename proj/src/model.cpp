#include "dicke/model.hpp"

#include <cmath>
#include <algorithm>

namespace dicke {

void ModelParams::validate() const {
    if (!(omega_c > 0.0)) throw Error("bad-params", "omega_c must be > 0");
    if (!(omega_0 > 0.0)) throw Error("bad-params", "omega_0 must be > 0");
    if (!(kappa > 0.0)) throw Error("bad-params", "kappa must be > 0");
    if (!(g >= 0.0)) throw Error("bad-params", "g must be >= 0");
    if (n_atoms < 1) throw Error("bad-params", "n_atoms must be >= 1");
}

double ModelParams::g_scaled() const { return g / std::sqrt(static_cast<double>(n_atoms)); }

void PerturbationSpec::validate() const {
    if (!(gamma >= 0.0)) throw Error("bad-params", "gamma must be >= 0");
    if (!(f >= 0.0 && f <= 1.0)) throw Error("bad-params", "f must lie in [0,1]");
}

SpinSubspace::SpinSubspace(int two_s_, int n_atoms_) : two_s(two_s_), n_atoms(n_atoms_) {
    if (n_atoms < 1) throw Error("bad-params", "n_atoms must be >= 1");
    if ((two_s - n_atoms) % 2 != 0)
        throw Error("bad-params", "2S must have the parity of N");
    int two_s_min = n_atoms % 2;
    if (two_s < two_s_min || two_s > n_atoms)
        throw Error("bad-params", "2S outside [N mod 2, N]");
}

std::vector<SpinSubspace> enumerate_subspaces(int n_atoms) {
    if (n_atoms < 1) throw Error("bad-params", "n_atoms must be >= 1");
    std::vector<SpinSubspace> out;
    out.reserve(static_cast<size_t>(subspace_count(n_atoms)));
    for (int two_s = n_atoms % 2; two_s <= n_atoms; two_s += 2)
        out.emplace_back(two_s, n_atoms);
    return out;
}

namespace {

// Minimal unsigned big integer, base 1e9 limbs. Only what the exact
// multiplicity formula needs: multiply/divide by machine ints.
struct BigUint {
    std::vector<uint32_t> limb{0};  // little-endian, base 1e9

    static constexpr uint32_t BASE = 1000000000u;

    static BigUint one() {
        BigUint b;
        b.limb = {1u};
        return b;
    }

    void mul(uint64_t m) {
        uint64_t carry = 0;
        for (auto& l : limb) {
            uint64_t cur = static_cast<uint64_t>(l) * m + carry;
            l = static_cast<uint32_t>(cur % BASE);
            carry = cur / BASE;
        }
        while (carry) {
            limb.push_back(static_cast<uint32_t>(carry % BASE));
            carry /= BASE;
        }
    }

    // Exact division; throws if a remainder is left.
    void div_exact(uint64_t d) {
        uint64_t rem = 0;
        for (size_t i = limb.size(); i-- > 0;) {
            uint64_t cur = rem * BASE + limb[i];
            limb[i] = static_cast<uint32_t>(cur / d);
            rem = cur % d;
        }
        if (rem != 0) throw Error("internal", "inexact big-integer division");
        while (limb.size() > 1 && limb.back() == 0) limb.pop_back();
    }

    double to_double() const {
        double v = 0.0;
        for (size_t i = limb.size(); i-- > 0;) v = v * BASE + limb[i];
        return v;
    }

    std::string to_string() const {
        std::string s = std::to_string(limb.back());
        for (size_t i = limb.size() - 1; i-- > 0;) {
            std::string part = std::to_string(limb[i]);
            s += std::string(9 - part.size(), '0') + part;
        }
        return s;
    }
};

} // namespace

Degeneracy degeneracy(const SpinSubspace& sub) {
    // (2S+1) N!/((N/2+S+1)!(N/2-S)!) = (2S+1)/(N+1) * C(N+1, (N-2S)/2).
    // Build the binomial by exact incremental ratios, then the two scalars.
    const int n = sub.n_atoms;
    const int k = (n - sub.two_s) / 2;  // N/2 - S
    BigUint b = BigUint::one();
    for (int i = 1; i <= k; ++i) {
        b.mul(static_cast<uint64_t>(n + 2 - i));  // (N+1) - i + 1
        b.div_exact(static_cast<uint64_t>(i));
    }
    b.mul(static_cast<uint64_t>(sub.two_s + 1));
    b.div_exact(static_cast<uint64_t>(n + 1));

    Degeneracy d;
    d.digits = b.to_string();
    d.value = b.to_double();
    d.exact_in_double = d.digits.size() <= 15 || d.value < 9.007199254740992e15;
    return d;
}

std::optional<double> critical_spin(const ModelParams& p) {
    p.validate();
    if (p.g == 0.0)
        throw Error("bad-params", "critical spin undefined at g = 0 (no transition)");
    double sc = p.omega_0 * (p.omega_c * p.omega_c + 0.25 * p.kappa * p.kappa) /
                (2.0 * p.omega_c * p.g * p.g);
    if (sc > 1.0) return std::nullopt;
    return sc;
}

double critical_coupling(const ModelParams& p, double s_tilde) {
    if (!(p.omega_c > 0.0) || !(p.omega_0 > 0.0) || !(p.kappa > 0.0))
        throw Error("bad-params", "rates must be positive");
    if (!(s_tilde > 0.0))
        throw Error("bad-params", "s_tilde must be > 0");
    return std::sqrt(p.omega_0 * (p.omega_c * p.omega_c + 0.25 * p.kappa * p.kappa) /
                     (2.0 * p.omega_c * s_tilde));
}

} // namespace dicke
