#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "dwym/complex_matrix.hpp"
#include "dwym/state.hpp"

namespace dwym {

/// Conservation metrics of one recorded step.
///
/// `energy` is the slice integral of the Yang-Mills density (the abelian one
/// for N = 1); `canonical_energy` is the quantity the integrator conserves.
/// For N > 1 the `charge` column holds the Frobenius norm of the matrix
/// charge, which is kept in `charge_matrix`.
struct DiagnosticsRecord {
  int step = 0;
  double time = 0.0;
  double energy = 0.0;
  double canonical_energy = 0.0;
  double charge = 0.0;
  double charge_drift = 0.0;
  double gauss_residual = 0.0;
  double noether_divergence = 0.0;
  double maxwell_residual = 0.0;
  std::optional<double> form_defect;

  CMatrix charge_matrix;
  /// sum |j^0| dx at this step; the scale charge drift is measured against.
  double charge_scale = 0.0;
};

/// Everything except charge_drift and form_defect, from a five-slice window
/// centred on the recorded slice. Throws NumericalError on non-finite values.
DiagnosticsRecord diagnose_window(const GaugeFieldState& window, const ModelParams& params,
                                  int step, double time);

/// Row t of a stacked window as a stand-alone slice.
GaugeFieldState slice_of(const GaugeFieldState& window, int t);

/// "step,time,energy,canonical_energy,charge,charge_drift,gauss_residual,
/// noether_divergence,maxwell_residual" plus ",form_defect" when requested.
std::string csv_header(bool with_form_defect);

/// Header and one row per record; numbers printed with 17 significant digits
/// so identical runs give identical bytes.
void write_csv(std::ostream& out, const std::vector<DiagnosticsRecord>& records);

}  // namespace dwym
