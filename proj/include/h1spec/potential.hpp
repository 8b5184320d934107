#pragma once

// Half-line potentials in the form V = sigma' + tau, with sigma locally L^2
// and tau locally L^1. Segments carry tagged coefficient forms; jumps of
// sigma (delta interactions) are first-class breakpoints. Gauge changes
// (sigma + theta, tau - theta') stack on top without touching base forms.

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "h1spec/profile.hpp"

namespace h1spec {

enum class CoeffKind { Constant, LogSingularity, ScaledProfile, ClosedForm, SampledTable };

enum class ClosedFormId {
  ExpDecaySigma,        // sigma(x) = e^{-x}
  WignerVonNeumannSigma,  // sigma(x) = -int_x^inf V, V = -8 sin(2t)/t above t0
  GrowingOscSigma,      // sigma(x) = -int_x^inf t^a sin(t^b) dt
  SquareWaveSigma,      // sawtooth primitive of the (1.7)-type square wave
};

struct GrowingOscData;  // cached tail quadrature, defined in potential.cpp

struct CoeffForm {
  CoeffKind kind = CoeffKind::Constant;
  double constant = 0.0;

  double x0 = 0.0;  // LogSingularity: log|x - x0|

  std::shared_ptr<const Profile> profile;  // ScaledProfile
  ProfilePart part = ProfilePart::S;
  double center = 0.0;
  double amplitude = 1.0;

  ClosedFormId cf_id = ClosedFormId::ExpDecaySigma;
  double cf_t0 = 1.0;                      // cutoff for WvN
  double cf_alpha = 0.0, cf_beta = 3.0;    // growing oscillation exponents
  std::shared_ptr<const GrowingOscData> cf_cache;

  ProfileForm table;  // SampledTable payload

  static CoeffForm zero() { return CoeffForm{}; }
  static CoeffForm constant_value(double c);
  static CoeffForm log_singularity(double x0);
  static CoeffForm scaled_profile(std::shared_ptr<const Profile> p, ProfilePart part,
                                  double center, double amplitude);
  static CoeffForm sampled_table(const std::vector<double>& xs,
                                 const std::vector<double>& ys);
  static CoeffForm closed_form(ClosedFormId id);

  enum class Side { Left, Right };
  double eval(double x, Side side = Side::Right) const;
  bool is_constant() const { return kind == CoeffKind::Constant; }
  // interior stop points (kinks, jumps, singularities) within (a, b)
  std::vector<double> knots(double a, double b) const;
  std::optional<double> singular_point() const;
};

struct GaugeTheta {
  enum class Kind { Constant, Sinusoid, PiecewiseLinear };
  Kind kind = Kind::Constant;
  double constant = 0.0;
  double amp = 0.0, freq = 1.0, phase = 0.0;  // amp * sin(freq x + phase)
  std::vector<double> xs, ys;                 // piecewise-linear table

  static GaugeTheta constant_shift(double c);
  static GaugeTheta sinusoid(double amp, double freq, double phase = 0.0);
  static GaugeTheta piecewise_linear(std::vector<double> xs, std::vector<double> ys);

  double theta(double x) const;
  double dtheta(double x) const;
  bool has_zero_derivative() const { return kind == Kind::Constant; }
  std::vector<double> knots(double a, double b) const;
};

struct Segment {
  double a = 0.0, b = 0.0;  // [a, b)
  CoeffForm sigma;
  CoeffForm tau;
};

struct SigmaJump {
  double x;
  double height;  // sigma(x+) - sigma(x-)
};

class PotentialSpec {
 public:
  PotentialSpec() = default;

  double x_max() const { return x_max_; }
  const std::string& description() const { return description_; }
  const std::vector<Segment>& segments() const { return segments_; }
  const std::vector<SigmaJump>& sigma_jumps() const { return sigma_jumps_; }
  const std::vector<GaugeTheta>& gauges() const { return gauges_; }

  double sigma(double x, CoeffForm::Side side = CoeffForm::Side::Right) const;
  double tau(double x, CoeffForm::Side side = CoeffForm::Side::Right) const;

  // mandatory integrator stops strictly inside (a, b)
  std::vector<double> breakpoints(double a, double b) const;
  // both coefficients constant on (a, b)? returns (sigma, tau) if so
  std::optional<std::pair<double, double>> constant_coeffs(double a, double b) const;
  // log-singularity locations within [a, b]
  std::vector<double> singularities(double a, double b) const;

  bool covers(double x) const { return x >= 0.0 && x <= x_max_ + 1e-12; }
  void require_coverage(double a, double b) const;

  friend PotentialSpec build_potential(std::vector<Segment> segments, double x_max,
                                       const std::string& description);
  friend PotentialSpec gauge_transform(const PotentialSpec& pot, const GaugeTheta& theta);

 private:
  double x_max_ = 0.0;
  std::vector<Segment> segments_;
  std::vector<SigmaJump> sigma_jumps_;
  std::vector<GaugeTheta> gauges_;
  std::string description_;

  const Segment* find_segment(double x, CoeffForm::Side side) const;
  void compute_jumps();
  void verify_local_integrability() const;
};

PotentialSpec build_potential(std::vector<Segment> segments, double x_max,
                              const std::string& description = "");

enum class PresetId {
  Free,
  DeltaComb,
  Coulomb,
  SquareWaveOsc,
  GrowingOsc,
  WignerVonNeumann,
  ExpDecay,
};

struct PresetParams {
  double x_max = 100.0;
  // delta_comb
  double comb_start = 2.0, comb_spacing = 2.0, comb_strength = 1.0;
  int comb_count = 5;
  // coulomb
  double coulomb_x0 = 3.0;
  // growing_osc: V = x^alpha sin(x^beta), beta > alpha + 1
  double osc_alpha = 0.5, osc_beta = 3.0;
  // wigner_von_neumann cutoff
  double wvn_t0 = 1.0;
};

PotentialSpec preset_potential(PresetId id, const PresetParams& params = {});
PresetId preset_from_name(const std::string& name);

PotentialSpec gauge_transform(const PotentialSpec& pot, const GaugeTheta& theta);

struct BoundaryAngle {
  double alpha = 0.0;  // in [0, pi); alpha = 0 is the Dirichlet-type condition
  explicit BoundaryAngle(double a = 0.0);
};

// cot(alpha2) = cot(alpha1) - theta0, mapped back into [0, pi)
BoundaryAngle relabel_boundary(BoundaryAngle alpha1, double theta0);

// || sigma chi_[x,x+1) ||_2 + || tau chi_[x,x+1) ||_1
double local_size(const PotentialSpec& pot, double x);

}  // namespace h1spec
