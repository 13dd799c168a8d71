#include "monospde/ensemble.hpp"

#include <atomic>
#include <cmath>
#include <mutex>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace monospde {

namespace {
std::atomic<int> g_workers{0};
}

void set_worker_count(int workers) {
    if (workers < 0) throw std::invalid_argument("set_worker_count: need workers >= 0");
    g_workers = workers;
}

int worker_count() {
    const int w = g_workers.load();
    if (w > 0) return w;
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

namespace detail {

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body) {
    std::exception_ptr first;
    std::mutex guard;
    const long count = static_cast<long>(n);
#pragma omp parallel for schedule(dynamic, 1) num_threads(worker_count())
    for (long i = 0; i < count; ++i) {
        try {
            body(static_cast<std::size_t>(i));
        } catch (...) {
            std::lock_guard<std::mutex> lock(guard);
            if (!first) first = std::current_exception();
        }
    }
    if (first) std::rethrow_exception(first);
}

}  // namespace detail

namespace {

std::vector<std::size_t> time_indices(const std::vector<double>& times, double dt) {
    std::vector<std::size_t> idx;
    idx.reserve(times.size());
    for (double t : times) {
        const std::size_t k = step_count(t, dt);
        if (!idx.empty() && k < idx.back())
            throw std::invalid_argument("observe_paths: times must be nondecreasing");
        idx.push_back(k);
    }
    return idx;
}

}  // namespace

std::vector<Vector> final_states(const SdeProblem& problem, const Vector& x0, double T,
                                 const EnsembleSpec& spec) {
    const std::size_t K = step_count(T, spec.dt);
    return map_paths<Vector>(spec.n_paths, spec.exec, [&](std::size_t i) {
        Rng rng = make_rng(spec.seed, spec.stream, i);
        Stepper stepper(problem, spec.dt, spec.prox);
        Vector x = x0;
        for (std::size_t k = 0; k < K; ++k) stepper.step(x, rng);
        return x;
    });
}

std::vector<std::vector<double>> observe_paths(const SdeProblem& problem, const Vector& x0,
                                               const std::vector<double>& times,
                                               const Observable& f, const EnsembleSpec& spec) {
    const auto idx = time_indices(times, spec.dt);
    return map_paths<std::vector<double>>(spec.n_paths, spec.exec, [&](std::size_t i) {
        Rng rng = make_rng(spec.seed, spec.stream, i);
        Stepper stepper(problem, spec.dt, spec.prox);
        Vector x = x0;
        std::vector<double> out;
        out.reserve(idx.size());
        std::size_t k = 0;
        for (std::size_t target : idx) {
            for (; k < target; ++k) stepper.step(x, rng);
            out.push_back(f(x));
        }
        return out;
    });
}

std::vector<std::vector<double>> same_noise_distances(const SdeProblem& problem, const Vector& x,
                                                      const Vector& y,
                                                      const std::vector<double>& times,
                                                      const EnsembleSpec& spec) {
    const auto idx = time_indices(times, spec.dt);
    const auto& space = problem.space();
    return map_paths<std::vector<double>>(spec.n_paths, spec.exec, [&](std::size_t i) {
        Rng rng = make_rng(spec.seed, spec.stream, i);
        Stepper sx(problem, spec.dt, spec.prox);
        Stepper sy(problem, spec.dt, spec.prox);
        Vector a = x;
        Vector b = y;
        std::vector<double> out;
        out.reserve(idx.size());
        std::size_t k = 0;
        for (std::size_t target : idx) {
            for (; k < target; ++k) {
                sx.step(a, rng);
                sy.step(b, problem.noise ? &sx.last_increment().image_h : nullptr);
            }
            out.push_back(space.norm_h(a - b));
        }
        return out;
    });
}

}  // namespace monospde
