#include "bnsmc/engines.hpp"

namespace bnsmc {

PathP simulate_path_algo1(const Model& model, const GridSpec& grid, RngStream& stream) {
    const StepConstants sc(model, grid.delta);
    PathP path;
    path.s.reserve(grid.steps + 1);
    path.z.reserve(grid.steps + 1);
    path.sigma_sq.reserve(grid.steps + 1);
    run_algo1(sc, grid, model.params().s0, model.params().sigma0_sq, stream,
              [&](std::uint64_t, double s, double z, double sig2) {
                  path.s.push_back(s);
                  path.z.push_back(z);
                  path.sigma_sq.push_back(sig2);
              });
    return path;
}

PathPstar simulate_path_algo2(const Model& model, const GridSpec& grid, RngStream& stream) {
    const StepConstants sc(model, grid.delta);
    PathPstar path;
    path.s.reserve(grid.steps + 1);
    path.sigma_sq.reserve(grid.steps + 1);
    run_algo2(sc, grid, model.params().s0, model.params().sigma0_sq, stream,
              [&](std::uint64_t, double s, double sig2) {
                  path.s.push_back(s);
                  path.sigma_sq.push_back(sig2);
              });
    return path;
}

}  // namespace bnsmc
