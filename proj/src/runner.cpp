#include "bnsmc/runner.hpp"

#include <atomic>
#include <chrono>
#include <exception>
#include <mutex>
#include <thread>

namespace bnsmc {

namespace {

constexpr std::uint64_t kChunkPaths = 512;

struct ChunkAccumulators {
    std::vector<SampleAccumulator> request_accs;
    SampleAccumulator weight_acc;
    std::uint64_t jumps1 = 0;
    std::uint64_t jumps3 = 0;
    std::uint64_t ar_proposals = 0;
};

struct PathState {
    double terminal = 0.0;
    double terminal_weight = 1.0;
    double sum_weighted = 0.0;  // sum over grid of S_k Z_k (S_k for algo2)
    double sum_plain = 0.0;     // sum over grid of S_k
};

double request_summand(const RunRequest& req, Method method, const PathState& st,
                       std::uint64_t steps) {
    const double grid_points = static_cast<double>(steps + 1);
    const bool weighted = method == Method::Algo1;
    switch (req.estimand) {
        case Estimand::TerminalMean:
            return weighted ? st.terminal * st.terminal_weight : st.terminal;
        case Estimand::AsianMean:
            return st.sum_weighted / grid_points;
        case Estimand::EuroCall: {
            const double payoff = st.terminal > req.strike ? st.terminal - req.strike : 0.0;
            return weighted ? st.terminal_weight * payoff : payoff;
        }
        case Estimand::AsianCall: {
            const double avg = st.sum_plain / grid_points;
            const double payoff = avg > req.strike ? avg - req.strike : 0.0;
            return weighted ? st.terminal_weight * payoff : payoff;
        }
    }
    throw Error(ErrorCode::BadArgument, "unknown estimand");
}

}  // namespace

RunResult run_simulation(const Model& model, const RunConfig& config,
                         std::span<const RunRequest> requests) {
    if (config.paths < 2) throw Error(ErrorCode::BadArgument, "run: paths must be >= 2");
    if (config.steps < 1) throw Error(ErrorCode::BadArgument, "run: steps must be >= 1");
    for (const RunRequest& req : requests) {
        const bool option = req.estimand == Estimand::EuroCall || req.estimand == Estimand::AsianCall;
        if (option && !(req.strike > 0.0)) {
            throw Error(ErrorCode::BadArgument, "run: option estimands need a strike > 0");
        }
    }
    if (config.method == Method::Algo2 && model.params().alpha < 0.0) {
        throw Error(ErrorCode::NegativeRate, "run: algo2 requires alpha >= 0");
    }

    const auto t0 = std::chrono::steady_clock::now();
    const GridSpec grid = GridSpec::uniform(model.params().horizon, config.steps);
    const StepConstants sc(model, grid.delta);

    const std::uint64_t n_chunks = (config.paths + kChunkPaths - 1) / kChunkPaths;
    std::vector<ChunkAccumulators> chunks(n_chunks);
    for (auto& c : chunks) c.request_accs.resize(requests.size());

    std::atomic<std::uint64_t> next_chunk{0};
    std::mutex failure_mutex;
    std::exception_ptr failure;

    auto process_path = [&](std::uint64_t path_index, ChunkAccumulators& acc) {
        RngStream stream(config.seed, path_index);
        PathState st;
        EngineDiagnostics diag;
        if (config.method == Method::Algo1) {
            run_algo1(sc, grid, model.params().s0, model.params().sigma0_sq, stream,
                      [&](std::uint64_t, double s, double z, double) {
                          st.sum_weighted += s * z;
                          st.sum_plain += s;
                          st.terminal = s;
                          st.terminal_weight = z;
                      });
        } else {
            run_algo2(sc, grid, model.params().s0, model.params().sigma0_sq, stream,
                      [&](std::uint64_t, double s, double) {
                          st.sum_weighted += s;
                          st.sum_plain += s;
                          st.terminal = s;
                      },
                      &diag);
        }
        for (std::size_t r = 0; r < requests.size(); ++r) {
            acc.request_accs[r].add(request_summand(requests[r], config.method, st, config.steps));
        }
        acc.weight_acc.add(st.terminal_weight);
        acc.jumps1 += diag.jumps1;
        acc.jumps3 += diag.jumps3;
        acc.ar_proposals += diag.ar_proposals;
    };

    auto worker = [&] {
        for (;;) {
            const std::uint64_t chunk = next_chunk.fetch_add(1);
            if (chunk >= n_chunks) return;
            const std::uint64_t begin = chunk * kChunkPaths;
            const std::uint64_t end = std::min(begin + kChunkPaths, config.paths);
            for (std::uint64_t path = begin; path < end; ++path) {
                try {
                    process_path(path, chunks[chunk]);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(failure_mutex);
                    if (!failure) {
                        try {
                            try {
                                throw;
                            } catch (const Error& e) {
                                throw Error(e.code(), std::string(e.what()) + " (path " +
                                                          std::to_string(path) + ")");
                            }
                        } catch (...) {
                            failure = std::current_exception();
                        }
                    }
                    next_chunk.store(n_chunks);  // drain remaining work
                    return;
                }
            }
        }
    };

    unsigned n_workers = config.workers > 0 ? static_cast<unsigned>(config.workers)
                                            : std::max(1u, std::thread::hardware_concurrency());
    n_workers = static_cast<unsigned>(std::min<std::uint64_t>(n_workers, n_chunks));
    std::vector<std::thread> pool;
    pool.reserve(n_workers > 0 ? n_workers - 1 : 0);
    for (unsigned i = 1; i < n_workers; ++i) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);

    // deterministic reduction: merge chunk accumulators in index order
    RunResult result;
    std::vector<SampleAccumulator> totals(requests.size());
    SampleAccumulator weight_total;
    for (const ChunkAccumulators& c : chunks) {
        for (std::size_t r = 0; r < requests.size(); ++r) totals[r].merge(c.request_accs[r]);
        weight_total.merge(c.weight_acc);
        result.diagnostics.jumps1 += c.jumps1;
        result.diagnostics.jumps3 += c.jumps3;
        result.diagnostics.ar_proposals += c.ar_proposals;
    }
    result.diagnostics.mean_terminal_weight = weight_total.mean();

    const auto t1 = std::chrono::steady_clock::now();
    result.wall_time_sec = std::chrono::duration<double>(t1 - t0).count();

    RunMeta meta;
    meta.alpha = model.params().alpha;
    meta.steps = config.steps;
    meta.paths = config.paths;
    meta.seed = config.seed;
    for (std::size_t r = 0; r < requests.size(); ++r) {
        EstimateReport report;
        report.estimand = requests[r].estimand;
        report.method = config.method;
        report.point = totals[r].mean();
        report.std_error = totals[r].std_error();
        report.strike = requests[r].strike;
        report.wall_time_sec = result.wall_time_sec;
        report.meta = meta;
        if (requests[r].estimand == Estimand::TerminalMean ||
            requests[r].estimand == Estimand::AsianMean) {
            report.error_percent = error_percent(model.params().s0, report.point);
        }
        result.reports.push_back(report);
    }
    return result;
}

}  // namespace bnsmc
