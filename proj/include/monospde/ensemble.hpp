#pragma once

#include "monospde/integrator.hpp"
#include "monospde/rng.hpp"

#include <cstdint>
#include <exception>
#include <functional>
#include <vector>

namespace monospde {

/// Serial is the reference path; Parallel runs the same per-path work under
/// OpenMP. Every path owns an rng seeded from (master seed, stream, path index)
/// and writes only its own slot, so both produce bit-identical results.
enum class Execution { Serial, Parallel };

void set_worker_count(int workers);
int worker_count();

namespace detail {
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);
}

/// results[i] = fn(i) for i in [0, n).
template <class R, class Fn>
std::vector<R> map_paths(std::size_t n, Execution exec, Fn&& fn) {
    std::vector<R> results(n);
    if (exec == Execution::Serial) {
        for (std::size_t i = 0; i < n; ++i) results[i] = fn(i);
    } else {
        detail::parallel_for(n, [&](std::size_t i) { results[i] = fn(i); });
    }
    return results;
}

using Observable = std::function<double(const Vector&)>;

struct EnsembleSpec {
    double dt = 1e-3;
    std::size_t n_paths = 1000;
    std::uint64_t seed = 0;
    Stream stream = Stream::Paths;
    Execution exec = Execution::Parallel;
    ProxOptions prox{};
};

/// X_T(x0) for each path.
std::vector<Vector> final_states(const SdeProblem& problem, const Vector& x0, double T,
                                 const EnsembleSpec& spec);

/// values[path][j] = f(X_{times[j]}(x0)); times must be nondecreasing grid multiples of dt.
std::vector<std::vector<double>> observe_paths(const SdeProblem& problem, const Vector& x0,
                                               const std::vector<double>& times,
                                               const Observable& f, const EnsembleSpec& spec);

/// |X_t(x) - X_t(y)|_H for pairs driven by the same noise, at each requested time.
std::vector<std::vector<double>> same_noise_distances(const SdeProblem& problem, const Vector& x,
                                                      const Vector& y,
                                                      const std::vector<double>& times,
                                                      const EnsembleSpec& spec);

}  // namespace monospde
