// Simulates a short dynamic run, corrects it and filters it with the
// published WB tuning, then prints the three MSE figures.
#include <iostream>

#include "tiltfuse/tiltfuse.hpp"

int main() {
  using namespace tiltfuse;
  CorrectionParams params;
  params.gyro_bias = -1.91195;
  params.accel_bias_x = -0.02340;
  params.accel_bias_y = -0.63629;
  params.scale_poly_x = published_scale_poly_x();
  params.scale_poly_y = published_scale_poly_y();
  params.N_drive = 2000;
  params.dt = 0.002;
  params.T_omega = 0.06874;
  params.T_v = 0.04607;

  const auto profile = MotionProfile::dynamic(20.0, params.dt, {});
  const auto run = simulate_run(profile, published_gyro_model(0.1), published_accel_model(0.04), params, 7);

  std::vector<double> truth;
  for (const auto& s : run.truth) truth.push_back(s.phi);
  const auto corrected = correct_log(run.log, params);

  std::vector<double> raw, bar;
  for (const auto& c : corrected) {
    raw.push_back(c.phi_raw);
    bar.push_back(c.phi_bar);
  }
  const auto spec = make_filter(Variant::WB, {{"alpha", 0.00185}, {"beta", -0.00018}}, params.dt);
  const auto est = run_filter(spec, corrected, params.gyro_bias);

  std::cout << "MSE raw arctangent: " << mse(truth, raw) << "\n"
            << "MSE corrected:      " << mse(truth, bar) << "\n"
            << "MSE WB filter:      " << mse(truth, est) << "\n"
            << "stability:          " << stability_name(check_stability(spec).status) << "\n";
}
