#pragma once

#include "sconv/model.hpp"
#include "sconv/path.hpp"
#include "sconv/series.hpp"

#include <cstdint>
#include <vector>

namespace sconv {

struct McConfig {
    std::int64_t reps = 1000;
    std::uint64_t seed = 0;
    std::uint64_t stream_base = 0;
    int jobs = 1;
};

/// Monte Carlo estimates of E|Y_n|^p on a grid, from one path per replicate
/// shared across all grid points.
struct MomentCurve {
    std::vector<std::int64_t> grid;
    std::vector<double> estimates;
    std::vector<double> std_errors;
    std::int64_t reps = 0;
    double p = 0.0;
    std::uint64_t seed = 0;
    FlagSet flags;  // MomentWarning when E|X|^p may be infinite
};

/// E|S_n/n - mu|^p.
MomentCurve estimate_pth_moment_of_mean(const SequenceModel& model, double p, const std::vector<std::int64_t>& grid,
                                        const McConfig& mc);
/// E|S_n - n mu|^p.
MomentCurve estimate_abs_moment_of_sum(const SequenceModel& model, double p, const std::vector<std::int64_t>& grid,
                                       const McConfig& mc);

/// Series of E|S_n/n - mu|^p from an empirical curve (block-interpolated).
SeriesDiagnostic strong_lp_series(const MomentCurve& curve);
/// Series from analytic terms.
SeriesDiagnostic strong_lp_series(const TermFn& terms, const std::vector<Comparison>& certificates,
                                  std::int64_t horizon);
/// Analytic terms m_p sd^p n^(-p/2) of the normal mean, with their closed form.
SeriesDiagnostic strong_lp_series_normal(double sd, double p, std::int64_t horizon);

/// T_n = sum_{m<=n} |values[m] - mu|^alpha for n = 1..N.
std::vector<double> strong_as_path_series(const PathSample& path, double alpha, double mu);

/// sum n^(alpha-2) P(|S_n - n mu| > n eps); analytic for normal, Cauchy and
/// point-mass summands, Monte Carlo on a geometric grid otherwise.
SeriesDiagnostic baum_katz_series(const SequenceModel& model, double alpha, double eps, std::int64_t horizon,
                                  const McConfig& mc, double grid_ratio = 2.0);

/// sum n^(alpha/p - 1/p - 2) E[(|S_n - n mu| - eps n^(1/p))^+].
SeriesDiagnostic chow_complete_moment_series(const SequenceModel& model, double alpha, double p, double eps,
                                             std::int64_t horizon, const McConfig& mc, double grid_ratio = 2.0);

/// sum n^-2 E|S_n - n mu|^alpha for 1 < alpha < 2.
SeriesDiagnostic chow_moment_series(const SequenceModel& model, double alpha, std::int64_t horizon,
                                    const McConfig& mc, double grid_ratio = 2.0);

/// Least-squares exponent of E|S_n - n mu|^alpha against n over the grid.
SlopeFit bdg_slope_check(const SequenceModel& model, double alpha, const std::vector<std::int64_t>& grid,
                         const McConfig& mc);

}  // namespace sconv
