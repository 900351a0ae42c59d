#include "commands.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>
#include <fmt/ostream.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "boxspline/io.hpp"
#include "boxspline/kernel.hpp"
#include "boxspline/pipelines.hpp"
#include "boxspline/shape.hpp"
#include "boxspline/tables.hpp"

namespace boxspline::cli {

namespace {

struct ArgumentError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

ShapeParams parse_shape(const std::string& text) {
  std::array<double, 3> v{};
  std::istringstream is(text);
  char sep = 0;
  if (!(is >> v[0] >> sep) || sep != ',' || !(is >> v[1] >> sep) || sep != ',' || !(is >> v[2]) || !is.eof())
    throw ArgumentError("--shape expects s,rho,theta_deg, got '" + text + "'");
  ShapeParams p{v[0], v[1], std::fmod(std::fmod(v[2], 180.0) + 180.0, 180.0) * std::numbers::pi / 180.0};
  try {
    p.validate();
  } catch (const std::exception& e) {
    throw ArgumentError(std::string("--shape: ") + e.what());
  }
  return p;
}

std::pair<int, int> parse_size(const std::string& text) {
  int w = 0, h = 0;
  char x = 0;
  std::istringstream is(text);
  if (!(is >> w >> x >> h) || (x != 'x' && x != 'X') || !is.eof() || w <= 0 || h <= 0)
    throw ArgumentError("--size expects WxH with positive integers, got '" + text + "'");
  return {w, h};
}

const std::map<std::string, Method> kMethods{
    {"basic", Method::Basic}, {"accurate", Method::Accurate}, {"dual", Method::Dual}};
const std::map<std::string, BasisId> kBases{{"theta", BasisId::Theta}, {"theta-prime", BasisId::ThetaPrime}};
const std::map<std::string, EdgePolicy> kEdges{{"zero", EdgePolicy::Zero}, {"replicate", EdgePolicy::Replicate}};
const std::map<std::string, InfeasiblePolicy> kInfeasiblePolicies{
    {"reject", InfeasiblePolicy::Reject}, {"clamp", InfeasiblePolicy::Clamp}};

struct FilterArgs {
  std::string input, output, covmap, shape;
  Method method = Method::Basic;
  BasisId basis = BasisId::Theta;
  double sigma_fraction = 0.5;
  EdgePolicy edge = EdgePolicy::Zero;
  InfeasiblePolicy infeasible = InfeasiblePolicy::Clamp;
  int threads = 0;
};

struct ImpulseArgs {
  std::string size, shape, output;
  BasisId basis = BasisId::Theta;
  Method method = Method::Basic;
  int threads = 0;
};

PipelinePolicy make_policy(BasisId basis, double fraction, EdgePolicy edge, InfeasiblePolicy inf, int threads) {
  PipelinePolicy p;
  p.basis = basis == BasisId::Theta ? BasisPolicy::Theta : BasisPolicy::ThetaPrime;
  p.sigma_fraction = fraction;
  p.edge = edge;
  p.infeasible = inf;
  p.threads = threads;
  return p;
}

const char* method_name(Method m) {
  switch (m) {
    case Method::Basic: return "basic";
    case Method::Accurate: return "accurate";
    case Method::Dual: return "dual";
  }
  return "?";
}

int cmd_filter(const FilterArgs& a, std::ostream& err) {
  if (a.covmap.empty() == a.shape.empty()) throw ArgumentError("exactly one of --covmap and --shape is required");
  const LoadedImage in = read_image(a.input);
  CovarianceMap cm;
  if (!a.covmap.empty()) {
    cm = read_covmap(a.covmap);
    if (cm.width != in.image.width || cm.height != in.image.height)
      throw ArgumentError(fmt::format("covariance map is {}x{} but the image is {}x{}", cm.width, cm.height,
                                      in.image.width, in.image.height));
  } else {
    cm = CovarianceMap::constant(in.image.width, in.image.height, covariance_from_shape(parse_shape(a.shape)));
  }
  const PipelinePolicy policy = make_policy(a.basis, a.sigma_fraction, a.edge, a.infeasible, a.threads);
  const PipelineResult r = run_pipeline(in.image, cm, a.method, policy);
  fmt::print(err, "feasibility: {}\n", r.report.summary());
  if (a.method == Method::Accurate)
    fmt::print(err, "stage A (isotropic, sigma^2 = {:.6g}): {:.3f} ms\n", r.report.sigma2, 1e3 * r.stage_a_seconds);
  fmt::print(err, "stage {} ({}): {:.3f} ms\n", a.method == Method::Accurate ? "B" : "1", method_name(a.method),
             1e3 * r.stage_b_seconds);
  int bits = 16;
  if (in.format == ImageFormat::Pgm8) bits = 8;
  write_image(a.output, r.image, format_for_path(a.output, bits));
  return kSuccess;
}

int cmd_impulse(const ImpulseArgs& a, std::ostream& out, std::ostream& err) {
  if (a.method == Method::Dual) throw ArgumentError("impulse supports --method basic or accurate");
  const auto [w, h] = parse_size(a.size);
  const ShapeParams sp = parse_shape(a.shape);
  const Covariance target = covariance_from_shape(sp);
  const PipelinePolicy policy =
      make_policy(a.basis, 0.5, EdgePolicy::Zero, InfeasiblePolicy::Reject, a.threads);
  Image img(w, h, 0.0);
  img.at(w / 2, h / 2) = 1.0;
  PipelineResult r;
  try {
    r = run_pipeline(img, CovarianceMap::constant(w, h, target), a.method, policy);
  } catch (const InfeasibleError&) {
    const double bound = elongation_bound(sp.orientation, a.basis);
    fmt::print(err, "shape (s={}, rho={}, theta={:.4g} deg) is infeasible on {}: elongation bound at this orientation is {}\n",
               sp.size, sp.elongation, sp.orientation * 180.0 / std::numbers::pi, basis_name(a.basis),
               std::isinf(bound) ? std::string("inf") : fmt::format("{:.4f}", bound));
    throw;
  }
  write_image(a.output, r.image, ImageFormat::Pfm);
  const Moments m = image_moments(r.image);
  const double d11 = m.cov.c11() - target.c11(), d12 = m.cov.c12() - target.c12(), d22 = m.cov.c22() - target.c22();
  const double dev = std::sqrt(d11 * d11 + 2 * d12 * d12 + d22 * d22) /
                     std::sqrt(target.c11() * target.c11() + 2 * target.c12() * target.c12() +
                               target.c22() * target.c22());
  fmt::print(out, "target_c11,target_c12,target_c22,c11,c12,c22,centroid_dx,centroid_dy,frobenius_dev_pct\n");
  fmt::print(out, "{:.6f},{:.6f},{:.6f},{:.6f},{:.6f},{:.6f},{:.6f},{:.6f},{:.4f}\n", target.c11(), target.c12(),
             target.c22(), m.cov.c11(), m.cov.c12(), m.cov.c22(), m.mean.x - w / 2, m.mean.y - h / 2, 100.0 * dev);
  return kSuccess;
}

template <typename T>
CLI::Option* add_choice(CLI::App* app, const std::string& name, T& value, const std::map<std::string, T>& map,
                        const std::string& help) {
  return app->add_option(name, value, help)->transform(CLI::CheckedTransformer(map, CLI::ignore_case));
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Constant-time space-variant elliptical Gaussian filtering with box splines", "boxspline"};
  app.require_subcommand(1);

  FilterArgs fa;
  auto* filter = app.add_subcommand("filter", "Filter an image with a per-pixel or constant covariance");
  filter->add_option("--input", fa.input, "Input image (PGM P5 or PFM)")->required();
  filter->add_option("--output", fa.output, "Output image (.pgm for PGM, otherwise PFM)")->required();
  auto* cov_opt = filter->add_option("--covmap", fa.covmap, "Covariance map file (SVCM)");
  auto* shape_opt = filter->add_option("--shape", fa.shape, "Constant target shape s,rho,theta_deg");
  cov_opt->excludes(shape_opt);
  add_choice(filter, "--method", fa.method, kMethods, "basic, accurate or dual")->required();
  add_choice(filter, "--basis", fa.basis, kBases, "theta or theta-prime (basic and accurate)");
  filter->add_option("--sigma-fraction", fa.sigma_fraction, "Stage A variance as a fraction of the bound")
      ->check(CLI::Range(0.0, 1.0));
  add_choice(filter, "--edge", fa.edge, kEdges, "zero or replicate");
  add_choice(filter, "--infeasible", fa.infeasible, kInfeasiblePolicies, "reject or clamp (default clamp)");
  filter->add_option("--threads", fa.threads, "Worker threads (default: available parallelism)")
      ->check(CLI::NonNegativeNumber);

  ImpulseArgs ia;
  auto* impulse = app.add_subcommand("impulse", "Filter a centred impulse and report its moments");
  impulse->add_option("--size", ia.size, "Image size WxH")->required();
  impulse->add_option("--shape", ia.shape, "Target shape s,rho,theta_deg")->required();
  add_choice(impulse, "--basis", ia.basis, kBases, "theta or theta-prime");
  add_choice(impulse, "--method", ia.method, kMethods, "basic or accurate");
  impulse->add_option("--output", ia.output, "Output PFM")->required();
  impulse->add_option("--threads", ia.threads, "Worker threads")->check(CLI::NonNegativeNumber);

  double pitch = 0.02;
  auto* error_table_cmd = app.add_subcommand("error-table", "Normalized errors of the single- and two-stage kernels");
  error_table_cmd->add_option("--pitch", pitch, "Integration pitch")->check(CLI::PositiveNumber);
  auto* sweep_cmd = app.add_subcommand("sigma-sweep", "Improvement versus the Stage A variance fraction");
  sweep_cmd->add_option("--pitch", pitch, "Integration pitch")->check(CLI::PositiveNumber);
  auto* bound_cmd = app.add_subcommand("bound-table", "Elongation bounds of the two bases");
  std::vector<int> ns{4, 8, 16};
  double clt_pitch = 0.05;
  auto* clt_cmd = app.add_subcommand("demo-clt", "Convergence of rotated box convolutions to a Gaussian");
  clt_cmd->add_option("--n", ns, "Number of directions (repeatable)")->check(CLI::Range(2, 64));
  clt_cmd->add_option("--pitch", clt_pitch, "Raster pitch in units of sigma")->check(CLI::Range(1e-3, 0.05));

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kSuccess;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kSuccess;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    for (auto* sub : app.get_subcommands()) err << sub->help();
    return kIoOrArgumentError;
  }

  try {
    if (filter->parsed()) return cmd_filter(fa, err);
    if (impulse->parsed()) return cmd_impulse(ia, out, err);
    if (error_table_cmd->parsed()) {
      out << error_table_csv(error_table(pitch));
      err << "* column evaluated on the sector-selected basis (infeasible on theta)\n";
    }
    if (sweep_cmd->parsed()) out << sigma_sweep_csv(sigma_sweep(pitch));
    if (bound_cmd->parsed()) out << bound_table_csv(bound_table());
    if (clt_cmd->parsed()) out << clt_table_csv(clt_table(ns, 1.0, clt_pitch));
    return kSuccess;
  } catch (const InfeasibleError& e) {
    err << "infeasible: " << e.what() << '\n';
    return kInfeasible;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kIoOrArgumentError;
  }
}

}  // namespace boxspline::cli
