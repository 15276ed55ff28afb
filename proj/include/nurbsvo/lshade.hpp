#pragma once

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <span>
#include <utility>
#include <vector>

namespace nurbsvo {

/// Objective value and non-negative constraint violation magnitudes of one candidate.
struct Evaluation {
    double f = 0.0;
    std::vector<double> violations;
};

/// Box-bounded minimization problem. `evaluate` must be pure and safe to call concurrently.
struct ProblemDef {
    std::vector<double> lower;
    std::vector<double> upper;
    std::function<Evaluation(std::span<const double>)> evaluate;

    std::size_t dimension() const { return lower.size(); }

    static ProblemDef from_functions(std::vector<double> lower, std::vector<double> upper,
                                     std::function<double(std::span<const double>)> objective,
                                     std::function<std::vector<double>(std::span<const double>)> constraints = {});
};

struct Individual {
    std::vector<double> x;
    double f = 0.0;
    /// Total constraint violation; 0 means feasible.
    double phi = 0.0;

    bool feasible() const { return phi == 0.0; }
};

/// Feasibility-rule ordering: true when `a` is strictly better than `b`.
bool precedes(const Individual& a, const Individual& b);

/// Winner of a parent/trial comparison; the parent wins exact ties.
const Individual& select(const Individual& parent, const Individual& trial);

/// Circular success history of scale factors and crossover rates.
struct SuccessMemory {
    std::vector<double> m_f;
    std::vector<double> m_cr;
    std::size_t index = 0;

    explicit SuccessMemory(std::size_t size, double initial = 0.5) : m_f(size, initial), m_cr(size, initial) {}
};

struct Success {
    double scale = 0.0;
    double crossover = 0.0;
    double improvement = 0.0;
};

struct OptimizerConfig {
    /// 0 selects 18 * dimension.
    std::size_t pop_init = 0;
    std::size_t pop_min = 4;
    std::size_t memory_size = 6;
    double p_best = 0.11;
    double archive_factor = 1.4;
    std::size_t budget = 10000;
    /// With a warm start w, the initial population is drawn from [w - a (w - lower), w + a (upper - w)].
    /// 1 samples the whole box.
    double warm_spread = 1.0;
    /// Wall-clock limit for the whole run; unset means evaluation-budget mode.
    std::optional<std::chrono::duration<double>> deadline;
    std::uint64_t seed = 0;
};

struct GenerationStats {
    double best_f = 0.0;
    double best_phi = 0.0;
    std::size_t pop_size = 0;
    std::size_t evaluations = 0;
};

struct OptimizerStats {
    std::size_t evaluations = 0;
    std::size_t generations = 0;
    double wall_time = 0.0;
    bool deadline_hit = false;
    std::vector<GenerationStats> history;
};

struct OptimizeResult {
    /// Empty only when no evaluation completed before the deadline.
    std::optional<Individual> best;
    OptimizerStats stats;
};

/// LSHADE with feasibility-rule selection. Deterministic for a given seed in budget mode.
/// Throws std::invalid_argument for an inconsistent problem or configuration.
OptimizeResult optimize(const ProblemDef& problem, const OptimizerConfig& config,
                        std::optional<std::span<const double>> warm_start = std::nullopt);

/// current-to-pbest/1 mutation with archive, binomial crossover and midpoint bound repair.
/// `population` must be sorted best-first; `p_count` of its leading entries form the p-best pool.
std::vector<double> generate_trial(std::size_t target, std::span<const Individual> population,
                                   std::span<const std::vector<double>> archive, double scale, double crossover,
                                   std::size_t p_count, std::span<const double> lower, std::span<const double> upper,
                                   std::mt19937_64& rng);

/// Writes the weighted Lehmer mean of F and weighted mean of CR at the circular index.
void update_memory(SuccessMemory& memory, std::span<const Success> successes);

/// round(n_init - progress * (n_init - n_min)), never below n_min. `progress` is in [0, 1].
std::size_t linear_population_size(double progress, std::size_t n_init, std::size_t n_min);

/// Memory update plus the population size for `evaluations` spent out of the budget.
std::pair<SuccessMemory, std::size_t> adapt(std::span<const Success> successes, const SuccessMemory& memory,
                                            std::size_t evaluations, const OptimizerConfig& config,
                                            std::size_t dimension);

}  // namespace nurbsvo
