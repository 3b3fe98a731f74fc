#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace dicke {

// dy/dt = rhs(t, y); rhs writes dydt (same length as y).
using OdeRhs = std::function<void(double t, const double* y, double* dydt)>;

// Observer verdict after every accepted step. ContinueModified tells the
// integrator the observer changed y in place (e.g. re-hermitized a density
// matrix) so the cached FSAL slope must be recomputed.
enum class StepAction { Continue, ContinueModified, Stop };

using StepObserver = std::function<StepAction(double t, double h, std::vector<double>& y)>;

struct OdeOptions {
    double rtol = 1e-10;
    double atol = 1e-12;
    double h_init = 0.0;   // 0 -> automatic
    double h_max = 0.0;    // 0 -> span
    long max_steps = 500'000'000L;
};

struct OdeStatus {
    double t = 0.0;
    double h_last = 0.0;
    long n_steps = 0;
    long n_rejected = 0;
    long n_rhs = 0;
    bool reached_end = false;   // false when the observer stopped early
    bool step_underflow = false;
};

// Embedded Dormand-Prince 5(4) pair with FSAL and PI step-size control.
// Workspace is kept across integrate() calls so propagator-style callers
// (many short integrations of the same size) do not reallocate.
class DormandPrince {
public:
    explicit DormandPrince(std::size_t n);

    OdeStatus integrate(const OdeRhs& rhs, std::vector<double>& y, double t0, double t1,
                        const OdeOptions& opt, const StepObserver* observer = nullptr);

    std::size_t size() const { return n_; }

private:
    std::size_t n_;
    std::vector<double> k_[7];
    std::vector<double> ytmp_, yerr_;
};

} // namespace dicke
