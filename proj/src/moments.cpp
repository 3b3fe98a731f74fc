#include "dicke/moments.hpp"

#include <algorithm>
#include <cmath>

namespace dicke {

void SubspaceMoments::check_cone(double tol) const {
    const double s = spin();
    const double slack = tol * std::max(1.0, s * s);
    if (sz_mean < -s - slack || sz_mean > s + slack)
        throw Error("moment-cone", "sz_mean outside [-S, S] for 2S=" + std::to_string(two_s));
    if (sz2_mean < sz_mean * sz_mean - slack || sz2_mean > s * s + slack)
        throw Error("moment-cone",
                    "sz2_mean outside [sz_mean^2, S^2] for 2S=" + std::to_string(two_s));
}

double SubspaceMoments::clamp_to_cone(double tol) {
    check_cone(tol);
    const double s = spin();
    double adj = 0.0;
    double m = std::clamp(sz_mean, -s, s);
    adj = std::max(adj, std::fabs(m - sz_mean));
    sz_mean = m;
    double z = std::clamp(sz2_mean, m * m, s * s);
    adj = std::max(adj, std::fabs(z - sz2_mean));
    sz2_mean = z;
    return adj;
}

MomentTable validate_table(MomentTable table, int n_atoms) {
    auto subs = enumerate_subspaces(n_atoms);
    std::sort(table.begin(), table.end(),
              [](const SubspaceMoments& a, const SubspaceMoments& b) { return a.two_s < b.two_s; });
    if (table.size() != subs.size())
        throw Error("missing-subspace", "expected " + std::to_string(subs.size()) +
                                            " subspaces, got " + std::to_string(table.size()));
    for (std::size_t i = 0; i < subs.size(); ++i) {
        if (table[i].two_s != subs[i].two_s)
            throw Error("missing-subspace",
                        "no moments for 2S=" + std::to_string(subs[i].two_s));
        if (table[i].n_atoms != n_atoms)
            throw Error("missing-subspace", "moment record with wrong n_atoms");
    }
    return table;
}

} // namespace dicke
