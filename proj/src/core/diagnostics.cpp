#include "dwym/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

#include "dwym/dynamics.hpp"
#include "dwym/hamiltonian.hpp"
#include "dwym/noether.hpp"

namespace dwym {

GaugeFieldState slice_of(const GaugeFieldState& window, int t) {
  const LatticeSpec& ws = window.spec();
  if (t < 0 || t >= ws.extent[0])
    throw std::invalid_argument("slice_of: time row " + std::to_string(t) + " out of range");
  LatticeSpec spec = ws;
  spec.extent[0] = 1;
  GaugeFieldState s(spec, window.params());
  const std::size_t per = spec.sites();
  auto copy = [&](const ComplexField& from, ComplexField& to) {
    const int c = from.components();
    const auto first = from.values().begin() + static_cast<std::ptrdiff_t>(t * per * c);
    std::copy(first, first + static_cast<std::ptrdiff_t>(per * c), to.values().begin());
  };
  copy(window.phi_field(), s.phi_field());
  copy(window.pi_field(), s.pi_field());
  copy(window.a_field(), s.a_field());
  copy(window.p_field(), s.p_field());
  return s;
}

namespace {

double row_max(const ComplexField& f, int t) {
  const std::size_t per = f.spec().spatial_sites();
  const int c = f.components();
  double m = 0.0;
  for (std::size_t s = t * per; s < (t + 1) * per; ++s)
    for (int k = 0; k < c; ++k) m = std::max(m, std::abs(f(s, k)));
  return m;
}

}  // namespace

DiagnosticsRecord diagnose_window(const GaugeFieldState& window, const ModelParams& params,
                                  int step, double time) {
  const int centre = window.spec().extent[0] / 2;
  const GaugeFieldState slice = slice_of(window, centre);
  const int nn = params.n * params.n;
  DiagnosticsRecord r;
  r.step = step;
  r.time = time;
  r.energy = slice_integral(eval_ym(slice, params).value);
  r.canonical_energy = canonical_energy(slice, params);

  const CurrentField j = sun_gauge_current(slice, params);
  r.charge_matrix = total_charge(j, 0);
  r.charge = params.n == 1 ? r.charge_matrix(0, 0).real() : r.charge_matrix.frobenius();
  for (std::size_t s = 0; s < slice.sites(); ++s) r.charge_scale += j.at(s, 0).frobenius();
  r.charge_scale *= slice.spec().spatial_cell_volume();

  const CurrentField gauss = maxwell_residual(slice, params);
  for (std::size_t s = 0; s < slice.sites(); ++s)
    for (int c = 0; c < nn; ++c) r.gauss_residual = std::max(r.gauss_residual, std::abs(gauss.j(s, c)));

  r.noether_divergence = row_max(divergence(sun_gauge_current(window, params)), centre);
  r.maxwell_residual = row_max(maxwell_residual(window, params).j, centre);

  for (double v : {r.energy, r.canonical_energy, r.charge, r.gauss_residual, r.noether_divergence,
                   r.maxwell_residual})
    if (!std::isfinite(v)) throw NumericalError("non-finite diagnostic at step " + std::to_string(step));
  return r;
}

std::string csv_header(bool with_form_defect) {
  std::string h =
      "step,time,energy,canonical_energy,charge,charge_drift,gauss_residual,noether_divergence,"
      "maxwell_residual";
  if (with_form_defect) h += ",form_defect";
  return h;
}

void write_csv(std::ostream& out, const std::vector<DiagnosticsRecord>& records) {
  const bool form = !records.empty() && records.front().form_defect.has_value();
  out << csv_header(form) << '\n';
  char buf[64];
  auto num = [&](double v) {
    std::snprintf(buf, sizeof buf, "%.17g", v);
    out << ',' << buf;
  };
  for (const DiagnosticsRecord& r : records) {
    out << r.step;
    for (double v : {r.time, r.energy, r.canonical_energy, r.charge, r.charge_drift, r.gauss_residual,
                     r.noether_divergence, r.maxwell_residual})
      num(v);
    if (form) num(r.form_defect.value_or(0.0));
    out << '\n';
  }
}

}  // namespace dwym
