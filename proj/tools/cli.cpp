#include "cli.hpp"

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <iomanip>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "mubex/mubex.hpp"

namespace mubtool {

namespace fs = std::filesystem;
using mubex::Errc;
using mubex::io::Json;

int exit_code_for(Errc code) {
  switch (code) {
    case Errc::CompositeDimension:
    case Errc::UnsupportedDimension:
      return kDimension;
    case Errc::DimensionMismatch:
    case Errc::MissingBasis:
      return kShape;
    case Errc::NotHermitian:
      return kHermiticity;
    case Errc::NotAState:
      return kStateValidity;
    default:
      return kFailure;
  }
}

namespace {

std::string digits_string(const mubex::FieldElement& e, char sep) {
  std::string s;
  for (std::size_t i = 0; i < e.digits.size(); ++i) {
    if (i) s += sep;
    s += std::to_string(e.digits[i]);
  }
  return s;
}

std::string products_string(const std::vector<int>& products) {
  std::string s;
  for (std::size_t i = 0; i < products.size(); ++i) {
    if (i) s += '+';
    s += std::to_string(products[i]);
  }
  return s;
}

double default_tolerance() {
  if (const char* env = std::getenv("MUBTOOL_TOL")) {
    char* end = nullptr;
    const double v = std::strtod(env, &end);
    if (end != env && *end == '\0' && v > 0.0) return v;
    throw mubex::Error(Errc::InvalidArgument, "MUBTOOL_TOL must be a positive number");
  }
  return 1e-10;
}

void emit(const Json& j, const std::string& path, std::ostream& out) {
  if (path.empty()) {
    out << j.dump(2) << '\n';
  } else {
    mubex::io::write_json_file(path, j);
  }
}

std::string fmt(double v) {
  std::ostringstream s;
  s << std::setprecision(17) << v;
  return s.str();
}

struct Options {
  std::int64_t n = 0;
  std::vector<std::int64_t> dims;
  std::string out;
  std::string input;
  std::string mub_dir;
  std::string convention = "standard";
  std::string truth;
  std::string estimate_out;
  double tol = 0.0;
  bool verify = false;
  bool general = false;
  bool clip = false;
  std::uint64_t shots = 0;
  std::uint64_t seed = 0;
  std::int64_t table_dim = 9;
  std::vector<std::int64_t> table_rs{1, 4, 5};
};

int cmd_mub(const Options& o, std::ostream& out) {
  const auto mubs = mubex::build_mub_set(o.n, mubex::parse_labeling(o.convention));
  const fs::path dir = o.out.empty() ? fs::path("mub_" + std::to_string(o.n)) : fs::path(o.out);
  mubex::io::write_mub_dir(dir, mubs);
  out << "wrote " << mubs.basis_count() << " bases to " << dir.string() << '\n';
  if (!o.verify) return kOk;
  const auto rep = mubex::verify_complementarity(mubs, o.tol);
  out << "max same-basis deviation: " << fmt(rep.max_same_basis_dev) << '\n'
      << "max cross-basis deviation: " << fmt(rep.max_cross_basis_dev) << '\n'
      << "tolerance: " << fmt(rep.tol) << '\n'
      << (rep.passed() ? "complementarity: pass" : "complementarity: FAIL") << '\n';
  return rep.passed() ? kOk : kFailure;
}

int cmd_expand(const Options& o, std::ostream& out) {
  const auto op = mubex::io::matrix_from_json(mubex::io::read_json_file(o.input)).matrix;
  const auto mubs = mubex::io::read_mub_dir(o.mub_dir);
  mubex::detail::require_dims(op.dim(), mubs);
  if (o.general) {
    emit(mubex::io::coefficients_to_json(mubex::expand_general(op, mubs)), o.out, out);
  } else {
    emit(mubex::io::coefficients_to_json(mubex::expand(op, mubs)), o.out, out);
  }
  return kOk;
}

int cmd_reconstruct(const Options& o, std::ostream& out) {
  const auto j = mubex::io::read_json_file(o.input);
  const auto mubs = mubex::io::read_mub_dir(o.mub_dir);
  if (mubex::io::is_general_coefficients(j)) {
    const auto m = mubex::reconstruct_general(mubex::io::general_coefficients_from_json(j), mubs);
    emit(mubex::io::matrix_to_json(m, mubs.convention(), "reconstructed operator"), o.out, out);
  } else {
    const auto h = mubex::reconstruct(mubex::io::coefficients_from_json(j), mubs);
    emit(mubex::io::matrix_to_json(h.matrix(), mubs.convention(), "reconstructed operator"), o.out, out);
  }
  return kOk;
}

int cmd_breidbart(const Options& o, std::ostream& out) {
  const auto mubs = mubex::build_mub_set(o.n, mubex::parse_labeling(o.convention));
  const auto sol = mubex::solve_breidbart(mubs);
  const auto props = mubex::verify_properties(sol, mubs, o.tol);
  const auto verdict = mubex::physicality_verdict(sol);
  const auto guess = mubex::guess_probabilities(o.n);

  Json spectra = Json::array();
  for (const auto& s : verdict.spectra) spectra.push_back(s.values);
  Json summary{
      {"dim", sol.dim},
      {"convention", mubs.convention()},
      {"x", sol.x},
      {"y", sol.y},
      {"guess_probabilities", {{"breidbart", guess.breidbart}, {"intercept_resend", guess.intercept_resend}}},
      {"properties",
       {{"tolerance", props.tol},
        {"correct_weight_dev", props.correct_weight_dev},
        {"off_letter_dev", props.off_letter_dev},
        {"unit_trace_dev", props.unit_trace_dev},
        {"orthonormality_dev", props.orthonormality_dev},
        {"passed", props.passed()}}},
      {"verdict",
       {{"physical", verdict.physical},
        {"min_eigenvalue", verdict.min_eigenvalue},
        {"negative_counts", verdict.negative_counts}}},
      {"spectra", std::move(spectra)}};

  if (!o.out.empty()) {
    const fs::path dir(o.out);
    for (std::size_t n = 0; n < sol.operators.size(); ++n) {
      mubex::io::write_json_file(dir / ("operator_" + std::to_string(n) + ".json"),
                                 mubex::io::matrix_to_json(sol.operators[n].matrix(), mubs.convention(),
                                                           "intermediate operator for letter " + std::to_string(n)));
    }
    mubex::io::write_json_file(dir / "summary.json", summary);
  }
  out << summary.dump(2) << '\n';
  return kOk;
}

int cmd_table1(const Options& o, std::ostream& out) {
  out << render_digit_sum_table(mubex::parse_prime_power(o.table_dim), o.table_rs);
  return kOk;
}

int cmd_tomo(const Options& o, std::ostream& out) {
  const auto file = mubex::io::matrix_from_json(mubex::io::read_json_file(o.input));
  const mubex::DensityOperator state(file.matrix);
  const auto mubs = mubex::build_mub_set(static_cast<std::int64_t>(state.dim()), mubex::parse_labeling(o.convention));
  const auto records = mubex::simulate_measurements(state, mubs, o.shots, o.seed);
  auto estimate = mubex::estimate_state(records, mubs);
  if (o.clip) estimate = mubex::clip_to_state(estimate).op();
  if (!o.out.empty()) mubex::io::write_json_file(o.out, mubex::io::records_to_json(records, mubs.dim(), mubs.convention()));
  if (!o.estimate_out.empty()) {
    mubex::io::write_json_file(o.estimate_out,
                               mubex::io::matrix_to_json(estimate.matrix(), mubs.convention(),
                                                         o.clip ? "estimate, clipped to a state" : "estimate"));
  }
  out << "shots: " << o.shots << '\n'
      << "seed: " << o.seed << '\n'
      << "sampler: " << mubex::kSamplerName << '\n'
      << "clipped: " << (o.clip ? "yes" : "no") << '\n'
      << "frobenius_error: " << fmt(mubex::frobenius_distance(estimate.matrix(), state.matrix())) << '\n';
  return kOk;
}

int cmd_estimate(const Options& o, std::ostream& out) {
  const auto j = mubex::io::read_json_file(o.input);
  const auto records = mubex::io::records_from_json(j);
  const auto convention = j.value("convention", o.convention);
  const auto mubs = mubex::build_mub_set(j.at("dim").get<std::int64_t>(), mubex::parse_labeling(convention));
  auto estimate = mubex::estimate_state(records, mubs);
  if (o.clip) estimate = mubex::clip_to_state(estimate).op();
  emit(mubex::io::matrix_to_json(estimate.matrix(), mubs.convention(), "estimate"), o.out, out);
  if (!o.truth.empty()) {
    const auto truth = mubex::io::matrix_from_json(mubex::io::read_json_file(o.truth)).matrix;
    mubex::detail::require_dims(truth.dim(), mubs);
    out << "frobenius_error: " << fmt(mubex::frobenius_distance(estimate.matrix(), truth)) << '\n';
  }
  return kOk;
}

int cmd_scan(const Options& o, std::ostream& out) {
  const auto rows = mubex::conjecture_scan(o.dims, mubex::parse_labeling(o.convention));
  out << "N\tx\tmin_eigenvalue\tmax_negative_count\tphysical\n";
  for (const auto& r : rows) {
    out << r.dim << '\t' << fmt(r.x) << '\t' << fmt(r.min_eigenvalue) << '\t' << r.max_negative_count << '\t'
        << (r.physical ? "yes" : "no") << '\n';
  }
  return kOk;
}

}  // namespace

std::string render_digit_sum_table(const mubex::PrimePower& pp, const std::vector<std::int64_t>& rs) {
  std::vector<std::vector<mubex::DigitSumRow>> tables;
  std::ostringstream s;
  s << "k\tk^T";
  for (auto r : rs) {
    tables.push_back(mubex::digit_sum_table(r, pp));
    s << "\tr" << r << "^T\tk^T r" << r << "\tSum";
  }
  s << '\n';
  for (std::int64_t k = 1; k <= pp.n; ++k) {
    const auto i = static_cast<std::size_t>(k - 1);
    s << k << "\t(" << digits_string(mubex::index_to_digits(k, pp), ',') << ')';
    for (std::size_t t = 0; t < rs.size(); ++t) {
      const auto& row = tables[t][i];
      s << "\t(" << digits_string(mubex::index_to_digits(rs[t], pp), ',') << ")\t" << products_string(row.products)
        << '\t' << row.sum;
    }
    s << '\n';
  }
  return s.str();
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Mutually unbiased bases, operator expansions, intermediate measurements and tomography"};
  app.name("mubtool");
  app.require_subcommand(1);
  Options o;
  std::optional<double> tol_flag;

  auto* mub = app.add_subcommand("mub", "write the N+1 bases of H_N as matrix files");
  mub->add_option("N", o.n, "prime-power dimension")->required();
  mub->add_option("--out", o.out, "output directory (default mub_N)");
  mub->add_flag("--verify", o.verify, "print complementarity deviations; fail above --tol");
  mub->add_option("--tol", tol_flag, "verification tolerance (default $MUBTOOL_TOL or 1e-10)");
  mub->add_option("--convention", o.convention, "labeling: standard or frobenius");

  auto* expand = app.add_subcommand("expand", "expansion coefficients of an operator");
  expand->add_option("OP", o.input, "matrix file")->required();
  expand->add_option("MUBDIR", o.mub_dir, "directory written by 'mub'")->required();
  expand->add_flag("--general", o.general, "accept non-Hermitian operators (complex coefficients)");
  expand->add_option("--out", o.out, "output file (default stdout)");

  auto* recon = app.add_subcommand("reconstruct", "operator from expansion coefficients");
  recon->add_option("COEFF", o.input, "coefficient file")->required();
  recon->add_option("MUBDIR", o.mub_dir, "directory written by 'mub'")->required();
  recon->add_option("--out", o.out, "output file (default stdout)");

  auto* breid = app.add_subcommand("breidbart", "intermediate operators, properties and physicality verdict");
  breid->add_option("N", o.n, "prime-power dimension")->required();
  breid->add_option("--out", o.out, "directory for operator files and summary.json");
  breid->add_option("--tol", tol_flag, "property tolerance (default $MUBTOOL_TOL or 1e-10)");
  breid->add_option("--convention", o.convention, "labeling: standard or frobenius");

  auto* table = app.add_subcommand("table1", "digit product table for GF(9)");
  table->add_option("--dim", o.table_dim, "field size");
  table->add_option("--r", o.table_rs, "element indices r")->delimiter(',');

  auto* tomo = app.add_subcommand("tomo", "simulate sub-ensemble tomography of a state");
  tomo->add_option("STATE", o.input, "density matrix file")->required();
  tomo->add_option("--shots", o.shots, "total number of copies M")->required()->check(CLI::PositiveNumber);
  tomo->add_option("--seed", o.seed, "sampler seed")->required();
  tomo->add_option("--out", o.out, "measurement record file");
  tomo->add_option("--estimate-out", o.estimate_out, "estimated density matrix file");
  tomo->add_option("--convention", o.convention, "labeling: standard or frobenius");
  tomo->add_flag("--clip", o.clip, "post-process: drop negative eigenvalues and renormalise");

  auto* est = app.add_subcommand("estimate", "estimate a state from measurement records");
  est->add_option("RECORDS", o.input, "record file written by 'tomo'")->required();
  est->add_option("--truth", o.truth, "true density matrix file; prints the Frobenius error");
  est->add_option("--out", o.out, "output file (default stdout)");
  est->add_option("--convention", o.convention, "labeling when the record file does not name one");
  est->add_flag("--clip", o.clip, "post-process: drop negative eigenvalues and renormalise");

  auto* scan = app.add_subcommand("scan", "physicality verdict for several dimensions");
  scan->add_option("N", o.dims, "prime-power dimensions")->required();
  scan->add_option("--convention", o.convention, "labeling: standard or frobenius");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kFailure;
  }

  try {
    o.tol = tol_flag ? *tol_flag : default_tolerance();
    if (!(o.tol > 0.0)) throw mubex::Error(Errc::InvalidArgument, "tolerance must be positive");
    if (*mub) return cmd_mub(o, out);
    if (*expand) return cmd_expand(o, out);
    if (*recon) return cmd_reconstruct(o, out);
    if (*breid) return cmd_breidbart(o, out);
    if (*table) return cmd_table1(o, out);
    if (*tomo) return cmd_tomo(o, out);
    if (*est) return cmd_estimate(o, out);
    if (*scan) return cmd_scan(o, out);
  } catch (const mubex::Error& e) {
    err << "error (" << mubex::errc_name(e.code()) << "): " << e.what() << '\n';
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kFailure;
  }
  return kFailure;
}

}  // namespace mubtool
