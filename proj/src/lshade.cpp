#include "nurbsvo/lshade.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace nurbsvo {
namespace {

using Clock = std::chrono::steady_clock;

constexpr double kMemoryFloor = 1e-6;

std::size_t uniform_index(std::mt19937_64& rng, std::size_t n) {
    return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
}

Individual evaluate_individual(const ProblemDef& problem, std::vector<double> x) {
    const Evaluation e = problem.evaluate(x);
    Individual ind;
    ind.x = std::move(x);
    ind.f = std::isnan(e.f) ? std::numeric_limits<double>::infinity() : e.f;
    ind.phi = 0.0;
    for (double v : e.violations) {
        ind.phi += std::isnan(v) ? std::numeric_limits<double>::infinity() : std::max(0.0, v);
    }
    return ind;
}

void validate(const ProblemDef& problem, const OptimizerConfig& config, std::size_t pop_init) {
    const std::size_t d = problem.dimension();
    if (d == 0 || problem.upper.size() != d) {
        throw std::invalid_argument("optimize: bounds must be non-empty and of equal size");
    }
    for (std::size_t i = 0; i < d; ++i) {
        if (!(problem.lower[i] < problem.upper[i])) {
            throw std::invalid_argument("optimize: lower bound must be below upper bound");
        }
    }
    if (!problem.evaluate) {
        throw std::invalid_argument("optimize: problem has no evaluator");
    }
    if (config.budget == 0) {
        throw std::invalid_argument("optimize: evaluation budget must be positive");
    }
    if (config.deadline && !(config.deadline->count() > 0.0)) {
        throw std::invalid_argument("optimize: deadline must be positive");
    }
    if (config.pop_min < 4 || pop_init < config.pop_min) {
        throw std::invalid_argument("optimize: need pop_init >= pop_min >= 4");
    }
    if (config.memory_size == 0 || !(config.p_best > 0.0 && config.p_best <= 1.0) || config.archive_factor < 0.0) {
        throw std::invalid_argument("optimize: invalid memory size, p_best or archive factor");
    }
    if (!(config.warm_spread >= 0.0 && config.warm_spread <= 1.0)) {
        throw std::invalid_argument("optimize: warm_spread must be in [0, 1]");
    }
}

}  // namespace

ProblemDef ProblemDef::from_functions(std::vector<double> lower, std::vector<double> upper,
                                      std::function<double(std::span<const double>)> objective,
                                      std::function<std::vector<double>(std::span<const double>)> constraints) {
    ProblemDef problem;
    problem.lower = std::move(lower);
    problem.upper = std::move(upper);
    problem.evaluate = [objective = std::move(objective),
                        constraints = std::move(constraints)](std::span<const double> x) {
        Evaluation e;
        e.f = objective(x);
        if (constraints) {
            e.violations = constraints(x);
        }
        return e;
    };
    return problem;
}

bool precedes(const Individual& a, const Individual& b) {
    const bool fa = a.feasible();
    const bool fb = b.feasible();
    if (fa != fb) {
        return fa;
    }
    return fa ? a.f < b.f : a.phi < b.phi;
}

const Individual& select(const Individual& parent, const Individual& trial) {
    return precedes(trial, parent) ? trial : parent;
}

std::vector<double> generate_trial(std::size_t target, std::span<const Individual> population,
                                   std::span<const std::vector<double>> archive, double scale, double crossover,
                                   std::size_t p_count, std::span<const double> lower, std::span<const double> upper,
                                   std::mt19937_64& rng) {
    const std::size_t n = population.size();
    if (n < 4) {
        throw std::invalid_argument("generate_trial: population must hold at least 4 individuals");
    }
    const std::vector<double>& x = population[target].x;
    const std::size_t d = x.size();

    const std::size_t pbest = uniform_index(rng, std::clamp<std::size_t>(p_count, 1, n));
    std::size_t r1 = 0;
    do {
        r1 = uniform_index(rng, n);
    } while (r1 == target);
    std::size_t r2 = 0;
    do {
        r2 = uniform_index(rng, n + archive.size());
    } while (r2 == target || r2 == r1);

    const std::vector<double>& xp = population[pbest].x;
    const std::vector<double>& x1 = population[r1].x;
    const std::vector<double>& x2 = r2 < n ? population[r2].x : archive[r2 - n];

    std::vector<double> trial(x);
    const std::size_t j_rand = uniform_index(rng, d);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (std::size_t j = 0; j < d; ++j) {
        const double u = unit(rng);
        if (j != j_rand && !(u < crossover)) {
            continue;
        }
        double v = x[j] + scale * (xp[j] - x[j]) + scale * (x1[j] - x2[j]);
        if (v < lower[j]) {
            v = 0.5 * (lower[j] + x[j]);
        } else if (v > upper[j]) {
            v = 0.5 * (upper[j] + x[j]);
        }
        trial[j] = v;
    }
    return trial;
}

void update_memory(SuccessMemory& memory, std::span<const Success> successes) {
    if (successes.empty()) {
        return;
    }
    const double total = std::accumulate(successes.begin(), successes.end(), 0.0,
                                         [](double acc, const Success& s) { return acc + s.improvement; });
    double num_f = 0.0;
    double den_f = 0.0;
    double cr = 0.0;
    for (const Success& s : successes) {
        const double w = total > 0.0 ? s.improvement / total : 1.0 / static_cast<double>(successes.size());
        num_f += w * s.scale * s.scale;
        den_f += w * s.scale;
        cr += w * s.crossover;
    }
    memory.m_f[memory.index] = std::clamp(den_f > 0.0 ? num_f / den_f : 0.5, kMemoryFloor, 1.0);
    memory.m_cr[memory.index] = std::clamp(cr, kMemoryFloor, 1.0);
    memory.index = (memory.index + 1) % memory.m_f.size();
}

std::size_t linear_population_size(double progress, std::size_t n_init, std::size_t n_min) {
    progress = std::clamp(progress, 0.0, 1.0);
    const double size = std::round(static_cast<double>(n_init) -
                                   progress * (static_cast<double>(n_init) - static_cast<double>(n_min)));
    return std::max(n_min, static_cast<std::size_t>(size));
}

std::pair<SuccessMemory, std::size_t> adapt(std::span<const Success> successes, const SuccessMemory& memory,
                                            std::size_t evaluations, const OptimizerConfig& config,
                                            std::size_t dimension) {
    SuccessMemory updated = memory;
    update_memory(updated, successes);
    const std::size_t n_init = config.pop_init == 0 ? 18 * dimension : config.pop_init;
    const double progress = static_cast<double>(evaluations) / static_cast<double>(config.budget);
    return {std::move(updated), linear_population_size(progress, n_init, config.pop_min)};
}

OptimizeResult optimize(const ProblemDef& problem, const OptimizerConfig& config,
                        std::optional<std::span<const double>> warm_start) {
    const std::size_t d = problem.dimension();
    const std::size_t pop_init = config.pop_init == 0 ? 18 * d : config.pop_init;
    validate(problem, config, pop_init);
    if (warm_start && warm_start->size() != d) {
        throw std::invalid_argument("optimize: warm start dimension mismatch");
    }

    const auto started = Clock::now();
    auto elapsed = [&] { return std::chrono::duration<double>(Clock::now() - started).count(); };
    auto out_of_time = [&] { return config.deadline && elapsed() >= config.deadline->count(); };

    std::mt19937_64 rng(config.seed);
    OptimizeResult result;
    OptimizerStats& stats = result.stats;
    auto record_best = [&](const Individual& ind) {
        if (!result.best || precedes(ind, *result.best)) {
            result.best = ind;
        }
    };

    // Initial population: all random draws happen before any evaluation.
    std::vector<double> init_lower = problem.lower;
    std::vector<double> init_upper = problem.upper;
    if (warm_start) {
        for (std::size_t j = 0; j < d; ++j) {
            const double w = std::clamp((*warm_start)[j], problem.lower[j], problem.upper[j]);
            init_lower[j] = w - config.warm_spread * (w - problem.lower[j]);
            init_upper[j] = w + config.warm_spread * (problem.upper[j] - w);
        }
    }
    std::vector<std::vector<double>> initial(pop_init, std::vector<double>(d));
    for (std::size_t i = 0; i < pop_init; ++i) {
        for (std::size_t j = 0; j < d; ++j) {
            initial[i][j] = init_lower[j] == init_upper[j]
                                ? init_lower[j]
                                : std::uniform_real_distribution<double>(init_lower[j], init_upper[j])(rng);
        }
    }
    if (warm_start) {
        for (std::size_t j = 0; j < d; ++j) {
            initial[0][j] = std::clamp((*warm_start)[j], problem.lower[j], problem.upper[j]);
        }
    }

    std::vector<Individual> population;
    population.reserve(pop_init);
    for (std::size_t i = 0; i < pop_init && stats.evaluations < config.budget; ++i) {
        if (out_of_time()) {
            stats.deadline_hit = true;
            break;
        }
        population.push_back(evaluate_individual(problem, std::move(initial[i])));
        ++stats.evaluations;
        record_best(population.back());
    }

    SuccessMemory memory(config.memory_size);
    std::vector<std::vector<double>> archive;
    auto by_rank = [](const Individual& a, const Individual& b) { return precedes(a, b); };

    while (!stats.deadline_hit && stats.evaluations < config.budget && population.size() >= config.pop_min) {
        std::stable_sort(population.begin(), population.end(), by_rank);
        const std::size_t n = population.size();
        const std::size_t p_count =
            std::max<std::size_t>(2, static_cast<std::size_t>(std::round(config.p_best * static_cast<double>(n))));
        const std::size_t n_trials = std::min(n, config.budget - stats.evaluations);

        std::vector<std::vector<double>> trials(n_trials);
        std::vector<double> scales(n_trials);
        std::vector<double> crossovers(n_trials);
        for (std::size_t i = 0; i < n_trials; ++i) {
            const std::size_t r = uniform_index(rng, memory.m_f.size());
            double scale = 0.0;
            std::cauchy_distribution<double> cauchy(memory.m_f[r], 0.1);
            do {
                scale = cauchy(rng);
            } while (!(scale > 0.0));
            scales[i] = std::min(scale, 1.0);
            crossovers[i] = std::clamp(std::normal_distribution<double>(memory.m_cr[r], 0.1)(rng), 0.0, 1.0);
            trials[i] = generate_trial(i, population, archive, scales[i], crossovers[i], p_count, problem.lower,
                                       problem.upper, rng);
        }

        std::vector<Individual> evaluated;
        evaluated.reserve(n_trials);
        for (std::size_t i = 0; i < n_trials; ++i) {
            if (out_of_time()) {
                stats.deadline_hit = true;
                break;
            }
            evaluated.push_back(evaluate_individual(problem, std::move(trials[i])));
            ++stats.evaluations;
            record_best(evaluated.back());
        }

        std::vector<Success> successes;
        for (std::size_t i = 0; i < evaluated.size(); ++i) {
            Individual& parent = population[i];
            Individual& trial = evaluated[i];
            if (&select(parent, trial) != &trial) {
                continue;
            }
            const double improvement =
                parent.feasible() && trial.feasible() ? parent.f - trial.f : parent.phi - trial.phi;
            successes.push_back({scales[i], crossovers[i], improvement});
            archive.push_back(std::move(parent.x));
            parent = std::move(trial);
        }
        update_memory(memory, successes);
        ++stats.generations;

        double progress = static_cast<double>(stats.evaluations) / static_cast<double>(config.budget);
        if (config.deadline) {
            progress = std::max(progress, elapsed() / config.deadline->count());
        }
        const std::size_t next_size = linear_population_size(progress, pop_init, config.pop_min);
        if (next_size < population.size()) {
            std::stable_sort(population.begin(), population.end(), by_rank);
            population.resize(next_size);
        }
        const auto archive_cap =
            static_cast<std::size_t>(std::round(config.archive_factor * static_cast<double>(population.size())));
        while (archive.size() > archive_cap) {
            archive.erase(archive.begin() + static_cast<std::ptrdiff_t>(uniform_index(rng, archive.size())));
        }

        stats.history.push_back({result.best->f, result.best->phi, population.size(), stats.evaluations});
    }

    stats.wall_time = elapsed();
    return result;
}

}  // namespace nurbsvo
