#pragma once

// JSON file formats.
//   matrix:        {"dim": N, "entries": [[{"re": .., "im": ..}, ..], ..],
//                   "metadata": {"convention": .., "description": ..}}
//   coefficients:  {"dim": N, "trace": t, "rows": [[..], ..]}        (N+1 rows)
//                  general operators add "kind": "general" and store
//                  {"re", "im"} objects for the trace and every entry.
//   records:       {"dim": N, "sampler": .., "convention": .., "records":
//                   [{"basis", "shots", "counts", "seed"}, ..]}
// Doubles are written in shortest round-trip form, so parse(write(x)) == x.

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "mubex/error.hpp"
#include "mubex/expansion.hpp"
#include "mubex/matrix.hpp"
#include "mubex/mub.hpp"
#include "mubex/tomography.hpp"

namespace mubex::io {

using Json = nlohmann::ordered_json;

struct MatrixFile {
  ComplexMatrix matrix;
  std::string convention;
  std::string description;
};

namespace detail {

inline Json complex_to_json(Complex z) { return Json{{"re", z.real()}, {"im", z.imag()}}; }

inline Complex complex_from_json(const Json& j) {
  return {j.at("re").get<double>(), j.at("im").get<double>()};
}

inline std::size_t dim_from_json(const Json& j) {
  const auto d = j.at("dim").get<std::int64_t>();
  if (d < 1) throw Error(Errc::DimensionMismatch, "dim must be positive");
  return static_cast<std::size_t>(d);
}

template <class F>
auto guarded(F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const Json::exception& e) {
    throw Error(Errc::Parse, e.what());
  }
}

}  // namespace detail

inline Json matrix_to_json(const MatrixFile& file) {
  const auto& m = file.matrix;
  Json rows = Json::array();
  for (std::size_t r = 0; r < m.dim(); ++r) {
    Json row = Json::array();
    for (std::size_t c = 0; c < m.dim(); ++c) row.push_back(detail::complex_to_json(m(r, c)));
    rows.push_back(std::move(row));
  }
  Json j{{"dim", m.dim()}, {"entries", std::move(rows)}};
  if (!file.convention.empty() || !file.description.empty()) {
    Json meta = Json::object();
    if (!file.convention.empty()) meta["convention"] = file.convention;
    if (!file.description.empty()) meta["description"] = file.description;
    j["metadata"] = std::move(meta);
  }
  return j;
}

inline Json matrix_to_json(const ComplexMatrix& m, std::string convention = {}, std::string description = {}) {
  return matrix_to_json(MatrixFile{m, std::move(convention), std::move(description)});
}

inline MatrixFile matrix_from_json(const Json& j) {
  return detail::guarded([&] {
    const std::size_t n = detail::dim_from_json(j);
    const auto& rows = j.at("entries");
    if (!rows.is_array() || rows.size() != n) {
      throw Error(Errc::DimensionMismatch, "entries must hold " + std::to_string(n) + " rows");
    }
    MatrixFile file{ComplexMatrix(n), {}, {}};
    for (std::size_t r = 0; r < n; ++r) {
      if (!rows[r].is_array() || rows[r].size() != n) {
        throw Error(Errc::DimensionMismatch, "row " + std::to_string(r) + " must hold " + std::to_string(n) +
                                                 " entries");
      }
      for (std::size_t c = 0; c < n; ++c) file.matrix(r, c) = detail::complex_from_json(rows[r][c]);
    }
    if (!file.matrix.is_finite()) throw Error(Errc::Parse, "matrix has non-finite entries");
    if (j.contains("metadata")) {
      const auto& meta = j.at("metadata");
      file.convention = meta.value("convention", std::string{});
      file.description = meta.value("description", std::string{});
    }
    return file;
  });
}

inline Json coefficients_to_json(const CoefficientTable& t) {
  Json rows = Json::array();
  for (std::size_t k = 0; k < t.rows(); ++k) {
    Json row = Json::array();
    for (std::size_t l = 0; l < t.dim(); ++l) row.push_back(t(k, l));
    rows.push_back(std::move(row));
  }
  return Json{{"dim", t.dim()}, {"trace", t.trace()}, {"rows", std::move(rows)}};
}

inline Json coefficients_to_json(const GeneralCoefficientTable& t) {
  Json rows = Json::array();
  for (std::size_t k = 0; k < t.rows(); ++k) {
    Json row = Json::array();
    for (std::size_t l = 0; l < t.dim(); ++l) row.push_back(detail::complex_to_json(t(k, l)));
    rows.push_back(std::move(row));
  }
  return Json{{"kind", "general"},
              {"dim", t.dim()},
              {"trace", detail::complex_to_json(t.trace())},
              {"rows", std::move(rows)}};
}

inline bool is_general_coefficients(const Json& j) { return j.value("kind", std::string{}) == "general"; }

namespace detail {

inline void check_rows(const Json& rows, std::size_t n) {
  if (!rows.is_array() || rows.size() != n + 1) {
    throw Error(Errc::DimensionMismatch, "rows must hold " + std::to_string(n + 1) + " rows");
  }
  for (const auto& row : rows) {
    if (!row.is_array() || row.size() != n) {
      throw Error(Errc::DimensionMismatch, "every row must hold " + std::to_string(n) + " values");
    }
  }
}

}  // namespace detail

/// Reads a Hermitian coefficient file. Row consistency is checked by
/// reconstruct, not here.
inline CoefficientTable coefficients_from_json(const Json& j) {
  return detail::guarded([&] {
    if (is_general_coefficients(j)) throw Error(Errc::Parse, "expected real coefficients, got kind 'general'");
    const std::size_t n = detail::dim_from_json(j);
    const auto& rows = j.at("rows");
    detail::check_rows(rows, n);
    CoefficientTable t(n, j.at("trace").get<double>());
    for (std::size_t k = 0; k <= n; ++k)
      for (std::size_t l = 0; l < n; ++l) t(k, l) = rows[k][l].get<double>();
    return t;
  });
}

inline GeneralCoefficientTable general_coefficients_from_json(const Json& j) {
  return detail::guarded([&] {
    const std::size_t n = detail::dim_from_json(j);
    const auto& rows = j.at("rows");
    detail::check_rows(rows, n);
    GeneralCoefficientTable t(n, detail::complex_from_json(j.at("trace")));
    for (std::size_t k = 0; k <= n; ++k)
      for (std::size_t l = 0; l < n; ++l) t(k, l) = detail::complex_from_json(rows[k][l]);
    return t;
  });
}

inline Json records_to_json(const std::vector<MeasurementRecord>& records, std::size_t dim,
                            const std::string& convention = {}) {
  Json arr = Json::array();
  for (const auto& r : records) {
    arr.push_back(Json{{"basis", r.basis}, {"shots", r.shots}, {"counts", r.counts}, {"seed", r.seed}});
  }
  Json j{{"dim", dim}, {"sampler", std::string(kSamplerName)}};
  if (!convention.empty()) j["convention"] = convention;
  j["records"] = std::move(arr);
  return j;
}

inline std::vector<MeasurementRecord> records_from_json(const Json& j) {
  return detail::guarded([&] {
    const std::size_t n = detail::dim_from_json(j);
    std::vector<MeasurementRecord> out;
    for (const auto& r : j.at("records")) {
      MeasurementRecord rec;
      rec.basis = r.at("basis").get<std::size_t>();
      rec.shots = r.at("shots").get<std::uint64_t>();
      rec.counts = r.at("counts").get<std::vector<std::uint64_t>>();
      rec.seed = r.at("seed").get<std::uint64_t>();
      if (rec.counts.size() != n) {
        throw Error(Errc::DimensionMismatch, "record counts must hold " + std::to_string(n) + " values");
      }
      out.push_back(std::move(rec));
    }
    return out;
  });
}

inline Json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::InvalidArgument, "cannot open " + path.string());
  return detail::guarded([&] { return Json::parse(in); });
}

inline void write_json_file(const std::filesystem::path& path, const Json& j) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw Error(Errc::InvalidArgument, "cannot write " + path.string());
  out << j.dump(2) << '\n';
}

inline std::filesystem::path basis_file(const std::filesystem::path& dir, std::size_t k) {
  return dir / ("basis_" + std::to_string(k) + ".json");
}

inline void write_mub_dir(const std::filesystem::path& dir, const MubSet& mubs) {
  std::filesystem::create_directories(dir);
  for (std::size_t k = 0; k < mubs.basis_count(); ++k) {
    write_json_file(basis_file(dir, k),
                    matrix_to_json(mubs.basis(k), mubs.convention(),
                                   "basis " + std::to_string(k) + "; column l is letter l"));
  }
}

inline MubSet read_mub_dir(const std::filesystem::path& dir) {
  std::vector<ComplexMatrix> bases;
  std::string convention;
  while (std::filesystem::exists(basis_file(dir, bases.size()))) {
    auto file = matrix_from_json(read_json_file(basis_file(dir, bases.size())));
    if (bases.empty()) convention = file.convention;
    bases.push_back(std::move(file.matrix));
  }
  if (bases.empty()) throw Error(Errc::InvalidArgument, "no basis files in " + dir.string());
  const auto n = static_cast<std::int64_t>(bases.front().dim());
  return MubSet(parse_prime_power(n), std::move(bases), convention);
}

}  // namespace mubex::io
