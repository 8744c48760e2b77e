#include "dynamo/cli.hpp"

#include <CLI11.hpp>

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>

#include "dynamo/branch.hpp"
#include "dynamo/eig.hpp"
#include "dynamo/error.hpp"
#include "dynamo/krein.hpp"
#include "dynamo/pencil.hpp"
#include "dynamo/toy2x2.hpp"

namespace dynamo::cli {

namespace {

using radial::AlphaProfile;

double parse_double(std::string_view text) {
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || ptr != text.data() + text.size() || !std::isfinite(v)) {
    throw Error(ErrorKind::InvalidArgument, "not a finite number: '" + std::string(text) + "'");
  }
  return v;
}

std::vector<double> parse_list(std::string_view text) {
  std::vector<double> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = text.find(',', start);
    out.push_back(parse_double(text.substr(start, comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

std::string join(const std::vector<double>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + format_number(v[i]);
  return s;
}

std::string eta_label(const krein::Involution& eta) {
  const krein::InvolutionClass k = krein::classify_involution(eta);
  if (k.kind == krein::InvolutionClass::Kind::Plus) return k.sign > 0 ? "identity" : "-identity";
  const double a[3] = {k.a1, k.a2, k.a3};
  for (int i = 0; i < 3; ++i) {
    if (std::abs(std::abs(a[i]) - 1.0) < 1e-9) {
      return std::string(a[i] < 0 ? "-" : "") + "sigma" + std::to_string(i + 1);
    }
  }
  return "n.sigma(" + format_number(k.a1) + "," + format_number(k.a2) + "," + format_number(k.a3) + ")";
}

std::string format_complex(std::complex<double> z) {
  const double im = z.imag() == 0.0 ? 0.0 : z.imag();
  return format_number(z.real() == 0.0 ? 0.0 : z.real()) + (im < 0 ? "-" : "+") +
         format_number(std::abs(im)) + "i";
}

// Flags shared by every operator-based command.
struct OperatorArgs {
  std::string alpha;
  std::string profile_file;
  std::optional<double> c;
  int l = 1;
  std::string bc = "physical";
  int n = 64;
  std::string scheme = "legendre";

  void attach(CLI::App* cmd, bool with_c) {
    cmd->add_option("--alpha", alpha, "Profile: poly:a0,a1,... or const:v");
    cmd->add_option("--profile-file", profile_file, "File with coeffs= and C= lines");
    if (with_c) cmd->add_option("--C", c, "Profile scale C");
    cmd->add_option("--l", l, "Harmonic degree (>= 1)");
    cmd->add_option("--bc", bc, "Boundary conditions")
        ->check(CLI::IsMember({"idealized", "physical"}));
    cmd->add_option("--n", n, "Interior grid nodes (>= 8)");
    cmd->add_option("--scheme", scheme, "Discretization")
        ->check(CLI::IsMember({"legendre", "chebyshev", "fd2"}));
  }

  AlphaProfile profile() const {
    if (alpha.empty() == profile_file.empty()) {
      throw Error(ErrorKind::InvalidArgument, "give exactly one of --alpha and --profile-file");
    }
    AlphaProfile p = alpha.empty() ? parse_profile_file(profile_file) : parse_alpha(alpha);
    if (c) p = p.with_scale(*c);
    return p;
  }

  radial::BoundaryCondition boundary() const {
    return bc == "idealized" ? radial::BoundaryCondition::Idealized
                             : radial::BoundaryCondition::Physical;
  }

  radial::RadialGrid grid() const {
    if (n < 8) throw Error(ErrorKind::InvalidArgument, "--n must be at least 8");
    const radial::Scheme s = scheme == "chebyshev" ? radial::Scheme::ChebyshevCollocation
                             : scheme == "fd2"     ? radial::Scheme::FiniteDifference2
                                                   : radial::Scheme::LegendreGalerkin;
    return radial::RadialGrid::make(s, n);
  }

  void echo(std::ostream& out, const AlphaProfile& p, bool with_scale) const {
    out << "# alpha_coeffs=" << join(p.coeffs) << '\n';
    if (with_scale) out << "# C=" << format_number(p.c) << '\n';
    out << "# l=" << l << "\n# bc=" << bc << "\n# scheme=" << scheme << "\n# n=" << n << '\n';
  }
};

struct RangeArgs {
  double c_min = 0.0;
  double c_max = 10.0;
  int count = 101;
  int m = 18;

  void attach(CLI::App* cmd) {
    cmd->add_option("--c-min", c_min, "Lower end of the C range");
    cmd->add_option("--c-max", c_max, "Upper end of the C range");
    cmd->add_option("--count", count, "Number of C samples");
    cmd->add_option("--m", m, "Number of tracked branches");
  }

  std::vector<double> grid() const {
    if (count < 1 || (count > 1 && !(c_max > c_min))) {
      throw Error(ErrorKind::InvalidArgument, "empty C range: need c_max > c_min and count >= 1");
    }
    if (m < 1) throw Error(ErrorKind::InvalidArgument, "--m must be positive");
    return branch::uniform_grid(c_min, c_max, count);
  }

  void echo(std::ostream& out) const {
    out << "# c_min=" << format_number(c_min) << "\n# c_max=" << format_number(c_max)
        << "\n# count=" << count << "\n# m=" << m << '\n';
  }
};

int toy_command(const toy::ToyPoint& p, bool csv, std::ostream& out) {
  const auto [em, ep] = toy::eigenvalues(p);
  const toy::ToyClassification cls = toy::classify_point(p);
  const std::string eta = cls.eta ? eta_label(*cls.eta) : "none";
  std::string types = "none";
  if (cls.krein_types) {
    types = krein::to_string(cls.krein_types->first) + "/" + krein::to_string(cls.krein_types->second);
  }
  if (csv) {
    out << "e0,f,b1,b2,delta,regime,eta,krein_types,re_e_minus,im_e_minus,re_e_plus,im_e_plus\n";
    out << format_number(p.e0) << ',' << format_number(p.f) << ',' << format_number(p.b1) << ','
        << format_number(p.b2) << ',' << format_number(cls.delta) << ',' << toy::to_string(cls.regime)
        << ',' << eta << ',' << types << ',' << format_number(em.real()) << ','
        << format_number(em.imag()) << ',' << format_number(ep.real()) << ','
        << format_number(ep.imag()) << '\n';
    return kOk;
  }
  out << "E_minus=" << format_complex(em) << '\n';
  out << "E_plus=" << format_complex(ep) << '\n';
  out << "delta=" << format_number(cls.delta) << '\n';
  out << "regime=" << toy::to_string(cls.regime) << '\n';
  out << "eta=" << eta << '\n';
  out << "krein_types=" << types << '\n';
  if (cls.regime == toy::Regime::ExceptionalCone) {
    const toy::EigenDecomposition jd = toy::jordan_at_ep(p);
    const toy::ChainResiduals r = toy::jordan_chain_check(jd.d, toy::Complex(p.e0, 0.0));
    out << "E=" << format_number(p.e0) << '\n';
    out << "jordan_chain_residuals=" << format_number(r.eigen) << ',' << format_number(r.associated)
        << ',' << format_number(r.nilpotent) << '\n';
  }
  return kOk;
}

int spectrum_command(const OperatorArgs& a, std::ostream& out, std::ostream& err) {
  const AlphaProfile profile = a.profile();
  const radial::DiscreteOperator op = radial::assemble(profile, a.l, a.grid(), a.boundary());
  const eig::Spectrum s = eig::dense_spectrum(op.matrix, {.with_residuals = true});
  out << "# command=spectrum\n";
  a.echo(out, profile, true);
  out << "# matrix_dim=" << s.matrix_dim << '\n';
  out << "index,re_lambda,im_lambda,residual\n";
  for (std::size_t i = 0; i < s.eigenvalues.size(); ++i) {
    const double res = i < s.residuals.size() ? s.residuals[i] : std::nan("");
    out << i << ',' << format_number(s.eigenvalues[i].real()) << ','
        << format_number(s.eigenvalues[i].imag()) << ',' << format_number(res) << '\n';
  }
  if (!s.converged) {
    err << "error: eigensolver did not converge; unconverged rows are nan\n";
    return kSolver;
  }
  return kOk;
}

void print_event(std::ostream& out, const branch::TransitionEvent& e) {
  out << "# EVENT " << branch::to_string(e.kind) << ' ' << format_number(e.c_star) << ' '
      << format_number(e.lambda_star.real()) << ' ' << format_number(e.lambda_star.imag()) << '\n';
  out << "# EVENT_DETAIL status=" << branch::to_string(e.status)
      << " c_low=" << format_number(e.c_low) << " c_high=" << format_number(e.c_high)
      << " branches=" << e.branch_ids.first << ',' << e.branch_ids.second
      << " participants=" << e.participants
      << " exponent=" << (e.exponent ? format_number(*e.exponent) : "nan") << '\n';
}

int sweep_command(const OperatorArgs& a, const RangeArgs& r, bool detect, bool refine,
                  bool auto_window, std::ostream& out, std::ostream& err) {
  const branch::SweepConfig cfg{a.profile(), a.l, a.boundary(), a.grid()};
  const branch::MatrixFamily family = branch::as_family(branch::AffineFamily::from_config(cfg));
  branch::SweepResult sw;
  std::vector<branch::Branch> branches;
  std::vector<branch::TransitionEvent> events;
  double c_max = r.c_max;
  if (auto_window) {
    if (r.count < 2 || !(r.c_max > 0.0)) {
      throw Error(ErrorKind::InvalidArgument, "--auto-window needs --c-max > 0 and --count >= 2");
    }
    branch::WindowResult w = branch::auto_window(family, r.m, r.c_max, r.count);
    c_max = w.hi;
    sw = std::move(w.sweep);
    branches = std::move(w.branches);
    events = std::move(w.events);
  } else {
    sw = branch::sweep(family, r.grid());
    branches = branch::match_branches(sw, r.m);
    if (detect || refine) events = branch::detect_transitions(branches, branch::default_im_tol(branches));
  }
  if (refine) {
    for (auto& e : events) e = branch::refine_ep(e, family);
  }

  out << "# command=sweep\n";
  a.echo(out, cfg.profile, false);
  RangeArgs shown = r;
  if (auto_window) {
    shown.c_min = 0.0;
    shown.c_max = c_max;
  }
  shown.echo(out);
  out << "# im_tol=" << format_number(branch::default_im_tol(branches)) << '\n';
  out << "branch_id,C,re_lambda,im_lambda\n";
  for (const auto& b : branches) {
    for (const auto& p : b.points) {
      out << b.id << ',' << format_number(p.c) << ',' << format_number(p.lambda.real()) << ','
          << format_number(p.lambda.imag()) << '\n';
    }
  }
  for (const auto& e : events) print_event(out, e);
  if (!sw.all_converged()) {
    err << "error: eigensolver did not converge at some C points\n";
    return kSolver;
  }
  return kOk;
}

int critical_command(const OperatorArgs& a, std::optional<double> lo, std::optional<double> hi,
                     double start, std::ostream& out) {
  const branch::SweepConfig cfg{a.profile(), a.l, a.boundary(), a.grid()};
  const branch::MatrixFamily family = branch::as_family(branch::AffineFamily::from_config(cfg));
  if (lo.has_value() != hi.has_value()) {
    throw Error(ErrorKind::InvalidArgument, "give both --c-lo and --c-hi or neither");
  }
  std::pair<double, double> bracket;
  if (lo) {
    bracket = {*lo, *hi};
  } else {
    bracket = branch::find_critical_bracket(family, start);
  }
  const branch::CriticalResult c = branch::critical_c(family, bracket.first, bracket.second);
  out << "# command=critical\n";
  a.echo(out, cfg.profile, false);
  out << "C_c=" << format_number(c.c) << '\n';
  out << "onset=" << (c.oscillatory ? "oscillatory" : "steady") << '\n';
  out << "lambda_re=" << format_number(c.lambda.real()) << '\n';
  out << "lambda_im=" << format_number(c.lambda.imag()) << '\n';
  out << "abscissa=" << format_number(c.abscissa) << '\n';
  out << "bracket=" << format_number(c.c_low) << ',' << format_number(c.c_high) << '\n';
  return kOk;
}

int crossings_command(const OperatorArgs& a, const RangeArgs& r, bool chain, std::ostream& out) {
  const branch::SweepConfig cfg{a.profile(), a.l, a.boundary(), a.grid()};
  if (chain) {
    const auto bad = pencil::vanishing_nodes(cfg.profile.with_scale(1.0), cfg.grid);
    if (!bad.empty()) {
      throw Error(ErrorKind::ProfileVanishes, "--chain needs a profile without zeros on the grid");
    }
  }
  const branch::MatrixFamily family = branch::as_family(branch::AffineFamily::from_config(cfg));
  const branch::SweepResult sw = branch::sweep(family, r.grid());
  const auto branches = branch::match_branches(sw, r.m);
  auto events = branch::detect_transitions(branches, branch::default_im_tol(branches));

  out << "# command=crossings\n";
  a.echo(out, cfg.profile, false);
  r.echo(out);
  out << "kind,status,c_star,re_lambda,im_lambda,min_gap,exponent,branch_a,branch_b";
  if (chain) out << ",chain_status,chain_r0,chain_r1,chain_r2";
  out << '\n';
  for (auto& e : events) {
    e = branch::refine_ep(e, family);
    out << branch::to_string(e.kind) << ',' << branch::to_string(e.status) << ','
        << format_number(e.c_star) << ',' << format_number(e.lambda_star.real()) << ','
        << format_number(e.lambda_star.imag()) << ',' << format_number(e.min_gap) << ','
        << (e.exponent ? format_number(*e.exponent) : "nan") << ',' << e.branch_ids.first << ','
        << e.branch_ids.second;
    if (chain) {
      try {
        const pencil::QuadraticPencil pen =
            pencil::build_pencil(cfg.profile.with_scale(e.c_star), cfg.l, cfg.grid, cfg.bc);
        const pencil::KeldyshChain kc = pencil::solve_keldysh_chain(pen, e.lambda_star);
        out << ",ok," << format_number(kc.relative_residuals[0]) << ','
            << format_number(kc.relative_residuals[1]) << ','
            << format_number(kc.relative_residuals[2]);
      } catch (const Error& ex) {
        out << ',' << to_string(ex.kind()) << ",nan,nan,nan";
      }
    }
    out << '\n';
  }
  return kOk;
}

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::NonConvergence:
    case ErrorKind::IllConditioned:
    case ErrorKind::NotDefective:
      return kSolver;
    case ErrorKind::NoSignChange:
    case ErrorKind::LostBracket:
      return kBracketing;
    default:
      return kUsage;
  }
}

}  // namespace

std::string format_number(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

radial::AlphaProfile parse_alpha(const std::string& spec) {
  const auto colon = spec.find(':');
  if (colon == std::string::npos) {
    throw Error(ErrorKind::InvalidArgument, "alpha spec must be poly:a0,... or const:v");
  }
  const std::string kind = spec.substr(0, colon);
  const std::string body = spec.substr(colon + 1);
  if (kind == "const") return AlphaProfile::constant(parse_double(body));
  if (kind == "poly") return AlphaProfile{parse_list(body), 1.0};
  throw Error(ErrorKind::InvalidArgument, "unknown alpha kind '" + kind + "'");
}

radial::AlphaProfile parse_profile_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::InvalidArgument, "cannot open profile file " + path);
  std::optional<std::vector<double>> coeffs;
  double c = 1.0;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw Error(ErrorKind::InvalidArgument, path + ":" + std::to_string(lineno) + ": expected key=value");
    }
    std::string key = line.substr(0, eq);
    key.erase(0, key.find_first_not_of(" \t"));
    key.erase(key.find_last_not_of(" \t") + 1);
    const std::string value = line.substr(eq + 1);
    if (key == "coeffs") {
      coeffs = parse_list(value);
    } else if (key == "C") {
      c = parse_double(value);
    } else {
      throw Error(ErrorKind::InvalidArgument, path + ":" + std::to_string(lineno) + ": unknown key '" + key + "'");
    }
  }
  if (!coeffs) throw Error(ErrorKind::InvalidArgument, path + ": missing coeffs= line");
  return AlphaProfile{*coeffs, c};
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Spectral analysis of the alpha^2-dynamo operator and the 2x2 pseudo-Hermitian model",
               "dynamo"};
  app.require_subcommand(1);

  toy::ToyPoint point;
  std::string toy_format = "text";
  CLI::App* toy_cmd = app.add_subcommand("toy", "Classify a point of the 2x2 model");
  toy_cmd->add_option("--e0", point.e0)->required();
  toy_cmd->add_option("--f", point.f)->required();
  toy_cmd->add_option("--b1", point.b1)->required();
  toy_cmd->add_option("--b2", point.b2)->required();
  toy_cmd->add_option("--format", toy_format)->check(CLI::IsMember({"text", "csv"}));

  OperatorArgs spec_args;
  CLI::App* spectrum_cmd = app.add_subcommand("spectrum", "Full spectrum at one profile scale");
  spec_args.attach(spectrum_cmd, true);

  OperatorArgs sweep_args;
  RangeArgs sweep_range;
  bool detect = false, refine = false, auto_window = false;
  CLI::App* sweep_cmd = app.add_subcommand("sweep", "Branches over a C range");
  sweep_args.attach(sweep_cmd, false);
  sweep_range.attach(sweep_cmd);
  sweep_cmd->add_flag("--detect-transitions", detect, "Append EVENT lines");
  sweep_cmd->add_flag("--refine", refine, "Refine events by bisection");
  sweep_cmd->add_flag("--auto-window", auto_window,
                      "Double --c-max from its value until two transitions are found");

  OperatorArgs crit_args;
  std::optional<double> c_lo, c_hi;
  double c_start = 1.0;
  CLI::App* critical_cmd = app.add_subcommand("critical", "Dynamo threshold C_c");
  crit_args.attach(critical_cmd, false);
  critical_cmd->add_option("--c-lo", c_lo, "Bracket lower end");
  critical_cmd->add_option("--c-hi", c_hi, "Bracket upper end");
  critical_cmd->add_option("--c-start", c_start, "First trial C for the doubling search");

  OperatorArgs cross_args;
  RangeArgs cross_range;
  bool chain = false;
  CLI::App* crossings_cmd = app.add_subcommand("crossings", "Refined branch collisions");
  cross_args.attach(crossings_cmd, false);
  cross_range.attach(crossings_cmd);
  crossings_cmd->add_flag("--chain", chain, "Solve the Jordan-Keldysh chain at each event");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*toy_cmd) return toy_command(point, toy_format == "csv", out);
    if (*spectrum_cmd) return spectrum_command(spec_args, out, err);
    if (*sweep_cmd) return sweep_command(sweep_args, sweep_range, detect, refine, auto_window, out, err);
    if (*critical_cmd) return critical_command(crit_args, c_lo, c_hi, c_start, out);
    if (*crossings_cmd) return crossings_command(cross_args, cross_range, chain, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return exit_code_for(e.kind());
  }
  return kUsage;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run(args, out, err);
}

}  // namespace dynamo::cli
