#pragma once

#include <vector>

#include "dwym/state.hpp"

/// Serial per-site loops over the raw storage, written index by index with
/// no shared helpers from the main kernels. Tests compare the parallel
/// kernels against these; the benchmark times both.
namespace dwym::reference {

/// Complex density per site; the imaginary part is returned as well.
std::vector<cplx> eval_free(const GaugeFieldState& st, const ModelParams& params);
std::vector<cplx> eval_kgm(const GaugeFieldState& st, const ModelParams& params);
std::vector<cplx> eval_ym(const GaugeFieldState& st, const ModelParams& params);

/// Currents laid out [site][mu] (scalar) or [site][mu][row][col] (matrix).
std::vector<cplx> u1_matter_current(const GaugeFieldState& st, const ModelParams& params);
/// lambda: one value per site; grad: [site][mu].
std::vector<cplx> u1_current(const GaugeFieldState& st, const ModelParams& params,
                             const std::vector<double>& lambda, const std::vector<double>& grad);
std::vector<cplx> sun_gauge_current(const GaugeFieldState& st, const ModelParams& params);
/// h: [site][row][col]; dh: [site][mu][row][col].
std::vector<cplx> sun_current(const GaugeFieldState& st, const ModelParams& params,
                              const std::vector<cplx>& h, const std::vector<cplx>& dh);

}  // namespace dwym::reference
