#include "fejcal/io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "fejcal/fejer.hpp"
#include "fejcal/funcexpr.hpp"
#include "fejcal/oracle.hpp"

namespace fejcal {

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open file for writing: " + path);
  out << content;
  if (!out) throw IoError("write failed: " + path);
}

std::string lowercase(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

double parse_number_token(const std::string& token, const std::string& context) {
  double v = 0.0;
  const char* begin = token.data();
  const char* end = token.data() + token.size();
  const auto res = std::from_chars(begin, end, v);
  if (res.ec != std::errc{} || res.ptr != end)
    throw IoError(context + ": expected a number, got '" + token + "'");
  return v;
}

std::vector<std::string> split_fields(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

std::string trim(const std::string& s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

}  // namespace

std::string format_float(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

// ---------------------------------------------------------------------------
// Matrix Market

DenseMatrix read_matrix_market(const std::string& path) {
  std::istringstream in(read_file(path));
  std::string banner;
  if (!std::getline(in, banner))
    throw IoError("matrix market: empty file: " + path);

  std::istringstream hs(banner);
  std::string magic, object, format, field, symmetry;
  hs >> magic >> object >> format >> field >> symmetry;
  if (magic != "%%MatrixMarket")
    throw IoError("matrix market: malformed header, expected %%MatrixMarket");
  object = lowercase(object);
  format = lowercase(format);
  field = lowercase(field);
  symmetry = lowercase(symmetry);
  if (object != "matrix")
    throw IoError("matrix market: unsupported object '" + object + "'");
  if (format != "coordinate" && format != "array")
    throw IoError("matrix market: unsupported format '" + format + "'");
  if (field != "complex")
    throw IoError("matrix market: unsupported field '" + field +
                  "' (complex required)");
  if (symmetry != "general")
    throw IoError("matrix market: unsupported symmetry '" + symmetry + "'");

  // Remaining content: skip comments, then take whitespace-separated tokens.
  std::vector<std::string> tokens;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line[0] == '%') continue;
    std::istringstream ls(line);
    std::string tok;
    while (ls >> tok) tokens.push_back(tok);
  }

  std::size_t pos = 0;
  auto next = [&](const char* what) -> std::string {
    if (pos >= tokens.size())
      throw IoError(std::string("matrix market: unexpected end of file, expected ") +
                    what);
    return tokens[pos++];
  };

  const auto rows = static_cast<long long>(parse_number_token(next("row count"), "matrix market size"));
  const auto cols = static_cast<long long>(parse_number_token(next("column count"), "matrix market size"));
  if (rows < 1 || cols < 1) throw IoError("matrix market: bad dimensions");
  if (rows != cols)
    throw IoError("matrix market: matrix must be square, got " +
                  std::to_string(rows) + "x" + std::to_string(cols));
  const std::size_t d = static_cast<std::size_t>(rows);
  DenseMatrix m(d);

  if (format == "coordinate") {
    const auto nnz = static_cast<long long>(
        parse_number_token(next("entry count"), "matrix market size"));
    if (nnz < 0) throw IoError("matrix market: negative entry count");
    for (long long e = 0; e < nnz; ++e) {
      const auto i = static_cast<long long>(parse_number_token(next("row index"), "matrix market entry"));
      const auto j = static_cast<long long>(parse_number_token(next("column index"), "matrix market entry"));
      const double re = parse_number_token(next("real part"), "matrix market entry");
      const double im = parse_number_token(next("imaginary part"), "matrix market entry");
      if (i < 1 || i > rows || j < 1 || j > cols)
        throw IoError("matrix market: index out of range: (" + std::to_string(i) +
                      ", " + std::to_string(j) + ")");
      m.at(static_cast<std::size_t>(i - 1), static_cast<std::size_t>(j - 1)) = cplx{re, im};
    }
  } else {
    // Array format: dense column-major values.
    for (std::size_t j = 0; j < d; ++j) {
      for (std::size_t i = 0; i < d; ++i) {
        const double re = parse_number_token(next("real part"), "matrix market entry");
        const double im = parse_number_token(next("imaginary part"), "matrix market entry");
        m.at(i, j) = cplx{re, im};
      }
    }
  }
  if (pos != tokens.size()) throw IoError("matrix market: trailing data");
  return m;
}

void write_matrix_market(const std::string& path, const DenseMatrix& m,
                         bool coordinate) {
  std::string out;
  const std::size_t d = m.dim();
  if (coordinate) {
    out += "%%MatrixMarket matrix coordinate complex general\n";
    std::size_t nnz = 0;
    for (const cplx& v : m.data())
      if (v != cplx{0.0, 0.0}) ++nnz;
    out += std::to_string(d) + " " + std::to_string(d) + " " + std::to_string(nnz) + "\n";
    for (std::size_t i = 0; i < d; ++i) {
      for (std::size_t j = 0; j < d; ++j) {
        const cplx v = m.at(i, j);
        if (v == cplx{0.0, 0.0}) continue;
        out += std::to_string(i + 1) + " " + std::to_string(j + 1) + " " +
               format_float(v.real()) + " " + format_float(v.imag()) + "\n";
      }
    }
  } else {
    out += "%%MatrixMarket matrix array complex general\n";
    out += std::to_string(d) + " " + std::to_string(d) + "\n";
    for (std::size_t j = 0; j < d; ++j)
      for (std::size_t i = 0; i < d; ++i)
        out += format_float(m.at(i, j).real()) + " " + format_float(m.at(i, j).imag()) + "\n";
  }
  write_file(path, out);
}

// ---------------------------------------------------------------------------
// Vector CSV

ComplexVec read_vector_csv(const std::string& path) {
  std::istringstream in(read_file(path));
  std::vector<cplx> entries;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    const auto fields = split_fields(t, ',');
    if (fields.size() != 2)
      throw IoError("vector csv: expected 're,im' at line " + std::to_string(line_no));
    try {
      const double re = parse_number_token(trim(fields[0]), "vector csv");
      const double im = parse_number_token(trim(fields[1]), "vector csv");
      entries.push_back(cplx{re, im});
    } catch (const IoError&) {
      throw IoError("vector csv: parse failure at line " + std::to_string(line_no) +
                    ": '" + t + "'");
    }
  }
  if (entries.empty()) throw IoError("vector csv: no entries in " + path);
  try {
    return ComplexVec(std::move(entries));
  } catch (const std::invalid_argument& e) {
    throw IoError("vector csv: " + std::string(e.what()));
  }
}

void write_vector_csv(const std::string& path, const ComplexVec& v) {
  write_file(path, vector_csv(v));
}

std::string vector_csv(const ComplexVec& v) {
  std::string out;
  for (std::size_t j = 0; j < v.dim(); ++j)
    out += format_float(v[j].real()) + "," + format_float(v[j].imag()) + "\n";
  return out;
}

// ---------------------------------------------------------------------------
// Result serialization

std::string moment_table_csv(const MomentTable& table) {
  std::string out = "k,re,im\n";
  for (int k = -table.order; k <= table.order; ++k)
    out += std::to_string(k) + "," + format_float(table.at(k).real()) + "," +
           format_float(table.at(k).imag()) + "\n";
  return out;
}

std::string density_csv(const DensityEstimate& est) {
  std::string out = "t,re,im\n";
  for (int j = 0; j < est.grid.size; ++j) {
    const cplx v = est.values[static_cast<std::size_t>(j)];
    out += format_float(est.grid.node(j)) + "," + format_float(v.real()) + "," +
           format_float(v.imag()) + "\n";
  }
  return out;
}

std::string unitarity_report_json(const UnitarityReport& report) {
  return std::string("{\"max_residual\":") + format_float(report.max_residual) +
         ",\"pass\":" + (report.pass ? "true" : "false") + "}\n";
}

namespace {

std::string result_object(const FunctionalResult& r, std::optional<double> gap) {
  std::string out = "{\"N\":" + std::to_string(r.order);
  out += ",\"value\":{\"re\":" + format_float(r.value.real()) +
         ",\"im\":" + format_float(r.value.imag()) + "}";
  out += ",\"error_bound\":" + format_float(r.error_bound);
  out += ",\"oracle_gap\":" + (gap ? format_float(*gap) : std::string("null"));
  out += std::string(",\"path\":\"") +
         (r.path == FunctionalPath::coefficient ? "coefficient" : "quadrature") +
         "\"}";
  return out;
}

}  // namespace

std::string functional_result_json(const FunctionalResult& r,
                                   std::optional<double> oracle_gap) {
  return result_object(r, oracle_gap) + "\n";
}

std::string functional_pair_json(const FunctionalResult& coeff,
                                 const FunctionalResult& quad,
                                 std::optional<double> gap_coeff,
                                 std::optional<double> gap_quad,
                                 double difference) {
  return "{\"coefficient\":" + result_object(coeff, gap_coeff) +
         ",\"quadrature\":" + result_object(quad, gap_quad) +
         ",\"difference\":" + format_float(difference) + "}\n";
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
  std::string out = "N,re,im,error_bound,oracle_gap\n";
  for (const SweepRow& r : rows) {
    out += std::to_string(r.order) + "," + format_float(r.value.real()) + "," +
           format_float(r.value.imag()) + "," + format_float(r.error_bound) + ",";
    if (r.oracle_gap) out += format_float(*r.oracle_gap);
    out += "\n";
  }
  return out;
}

std::string sweep_json(const std::vector<SweepRow>& rows) {
  std::string out = "{\"rows\":[";
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const SweepRow& r = rows[i];
    FunctionalResult fr;
    fr.order = r.order;
    fr.value = r.value;
    fr.error_bound = r.error_bound;
    fr.path = FunctionalPath::coefficient;
    if (i) out += ",";
    out += result_object(fr, r.oracle_gap);
  }
  out += "]}\n";
  return out;
}

std::string exact_value_json(cplx value) {
  return "{\"value\":{\"re\":" + format_float(value.real()) +
         ",\"im\":" + format_float(value.imag()) + "}}\n";
}

std::string spectral_form_json(const SpectralForm& s) {
  const std::size_t d = s.dim();
  std::string out = "{\"dim\":" + std::to_string(d) + ",\"phases\":[";
  for (std::size_t j = 0; j < d; ++j) {
    if (j) out += ",";
    out += format_float(s.eigenphases[j]);
  }
  out += "],\"eigenvectors\":[";
  // column-major, one [re, im] pair per entry
  bool first = true;
  for (std::size_t j = 0; j < d; ++j) {
    for (std::size_t i = 0; i < d; ++i) {
      if (!first) out += ",";
      first = false;
      const cplx v = s.eigenvectors.at(i, j);
      out += "[" + format_float(v.real()) + "," + format_float(v.imag()) + "]";
    }
  }
  out += "]}\n";
  return out;
}

SpectralForm parse_spectral_form_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw IoError("spectral json: " + std::string(e.what()));
  }
  try {
    const std::size_t d = j.at("dim").get<std::size_t>();
    SpectralForm s;
    s.eigenphases = j.at("phases").get<std::vector<double>>();
    if (s.eigenphases.size() != d)
      throw IoError("spectral json: phase count does not match dim");
    const auto& entries = j.at("eigenvectors");
    if (entries.size() != d * d)
      throw IoError("spectral json: eigenvector entry count does not match dim");
    s.eigenvectors = DenseMatrix(d);
    std::size_t idx = 0;
    for (std::size_t col = 0; col < d; ++col)
      for (std::size_t row = 0; row < d; ++row) {
        const auto& pair = entries.at(idx++);
        s.eigenvectors.at(row, col) =
            cplx{pair.at(0).get<double>(), pair.at(1).get<double>()};
      }
    return s;
  } catch (const nlohmann::json::exception& e) {
    throw IoError("spectral json: " + std::string(e.what()));
  }
}

SpectralForm read_spectral_json(const std::string& path) {
  return parse_spectral_form_json(read_file(path));
}

void write_spectral_json(const std::string& path, const SpectralForm& s) {
  write_file(path, spectral_form_json(s));
}

// ---------------------------------------------------------------------------
// Operator generators

GeneratedOperator generate_operator(const std::string& name, std::size_t dim,
                                    std::uint64_t seed) {
  if (dim == 0) throw std::invalid_argument("generator: dimension must be >= 1");

  if (name == "identity") {
    SpectralForm s;
    s.eigenphases.assign(dim, 0.0);
    s.eigenvectors = DenseMatrix::identity(dim);
    return {UnitaryOperator::dense(DenseMatrix::identity(dim)), std::move(s)};
  }
  if (name == "shift") {
    DenseMatrix m(dim);
    for (std::size_t j = 0; j < dim; ++j) m.at((j + 1) % dim, j) = cplx{1.0, 0.0};
    return {UnitaryOperator::dense(std::move(m)), std::nullopt};
  }
  if (name == "dft-diagonal") {
    std::vector<double> phases(dim);
    for (std::size_t j = 0; j < dim; ++j)
      phases[j] = kTwoPi * static_cast<double>(j) / static_cast<double>(dim);
    SpectralForm s;
    s.eigenphases = phases;
    s.eigenvectors = DenseMatrix::identity(dim);
    return {UnitaryOperator::diagonal(std::move(phases)), std::move(s)};
  }
  if (name == "random-diagonal") {
    Rng rng(seed);
    std::vector<double> phases(dim);
    for (double& p : phases) p = rng.uniform(0.0, kTwoPi);
    SpectralForm s;
    s.eigenphases = phases;
    s.eigenvectors = DenseMatrix::identity(dim);
    return {UnitaryOperator::diagonal(std::move(phases)), std::move(s)};
  }
  if (name == "constructed-spectrum") {
    Rng rng(seed);
    std::vector<double> thetas(dim);
    for (double& t : thetas) t = rng.uniform(0.0, kTwoPi);
    ConstructedUnitary cu = construct(thetas, seed + 1);
    return {UnitaryOperator::dense(std::move(cu.dense)), std::move(cu.spectral)};
  }
  throw std::invalid_argument("generator: unknown name '" + name + "'");
}

// ---------------------------------------------------------------------------
// CLI

namespace {

struct CliOptions {
  std::string matrix_path;
  std::string generate;
  std::uint64_t dim = 0;
  std::uint64_t seed = 0;
  std::string function;
  std::string x_path;
  long long x_basis = -1;
  long long x_seed = -1;
  std::string y_path;
  long long y_basis = -1;
  long long y_seed = -1;
  long long order = -1;
  std::vector<long long> n_list;
  long long grid_m = 0;
  std::string out_path;
  std::string format;
};

void add_operator_options(CLI::App* cmd, CliOptions& o) {
  cmd->add_option("--matrix", o.matrix_path, "Matrix Market file with a dense unitary");
  cmd->add_option("--generate", o.generate,
                  "builtin operator: identity|shift|dft-diagonal|random-diagonal|"
                  "constructed-spectrum");
  cmd->add_option("--dim", o.dim, "dimension for --generate");
  cmd->add_option("--seed", o.seed, "seed for seeded generators");
}

void add_vector_options(CLI::App* cmd, CliOptions& o) {
  cmd->add_option("--x", o.x_path, "vector x from CSV");
  cmd->add_option("--basis", o.x_basis, "x = standard basis vector k");
  cmd->add_option("--random-seed", o.x_seed, "x = seeded random unit vector");
  cmd->add_option("--y", o.y_path, "vector y from CSV (defaults to x)");
  cmd->add_option("--y-basis", o.y_basis, "y = standard basis vector k");
  cmd->add_option("--y-random-seed", o.y_seed, "y = seeded random unit vector");
}

void add_output_options(CLI::App* cmd, CliOptions& o) {
  cmd->add_option("--out", o.out_path, "output path (stdout when absent)");
  cmd->add_option("--format", o.format, "output format: json|csv");
  cmd->set_config("--config", "", "read options from a config file");
}

void emit(const CliOptions& o, const std::string& content) {
  if (o.out_path.empty())
    std::cout << content;
  else
    write_file(o.out_path, content);
}

GeneratedOperator resolve_operator(const CliOptions& o) {
  const bool has_matrix = !o.matrix_path.empty();
  const bool has_generate = !o.generate.empty();
  if (has_matrix == has_generate)
    throw std::invalid_argument(
        "exactly one operator source required: --matrix or --generate");
  if (has_matrix)
    return {UnitaryOperator::dense(read_matrix_market(o.matrix_path)), std::nullopt};
  if (o.dim == 0) throw std::invalid_argument("--generate requires --dim");
  return generate_operator(o.generate, o.dim, o.seed);
}

ComplexVec resolve_vector(std::size_t dim, const std::string& path, long long basis,
                          long long seed, const char* which) {
  const int given = (!path.empty() ? 1 : 0) + (basis >= 0 ? 1 : 0) + (seed >= 0 ? 1 : 0);
  if (given > 1)
    throw std::invalid_argument(std::string(which) +
                                ": choose one of file, basis index, or random seed");
  if (!path.empty()) {
    ComplexVec v = read_vector_csv(path);
    if (v.dim() != dim)
      throw std::invalid_argument(std::string(which) + ": vector dimension " +
                                  std::to_string(v.dim()) +
                                  " does not match operator dimension " +
                                  std::to_string(dim));
    return v;
  }
  if (basis >= 0) {
    if (static_cast<std::size_t>(basis) >= dim)
      throw std::invalid_argument(std::string(which) + ": basis index out of range");
    return ComplexVec::basis(dim, static_cast<std::size_t>(basis));
  }
  if (seed >= 0) return Rng(static_cast<std::uint64_t>(seed)).unit_vector(dim);
  throw std::invalid_argument(std::string(which) +
                              ": vector source required (file, --basis, or seed)");
}

ComplexVec resolve_x(const CliOptions& o, std::size_t dim) {
  return resolve_vector(dim, o.x_path, o.x_basis, o.x_seed, "x");
}

ComplexVec resolve_y(const CliOptions& o, std::size_t dim, const ComplexVec& x) {
  if (o.y_path.empty() && o.y_basis < 0 && o.y_seed < 0) return x;
  return resolve_vector(dim, o.y_path, o.y_basis, o.y_seed, "y");
}

// Accepts a builtin name (one, z, re_z, exp_z, power(n), inv_shift(w)) or an
// expression; expressions must pass the pole scan.
CircleFunction resolve_function(const std::string& text) {
  if (text.empty()) throw std::invalid_argument("--function required");
  if (text == "one") return CircleFunction::one();
  if (text == "z") return CircleFunction::z();
  if (text == "re_z") return CircleFunction::re_z();
  if (text == "exp_z") return CircleFunction::exp_z();

  auto inner_of = [&](const std::string& prefix) -> std::optional<std::string> {
    if (text.size() > prefix.size() + 1 && text.rfind(prefix, 0) == 0 &&
        text.back() == ')')
      return text.substr(prefix.size(), text.size() - prefix.size() - 1);
    return std::nullopt;
  };
  if (const auto arg = inner_of("power(")) {
    const ExprPtr e = parse(*arg);
    const cplx v = eval(*e, cplx{1.0, 0.0});
    if (v.imag() != 0.0 || v.real() != std::floor(v.real()))
      throw std::invalid_argument("power(): integer argument required");
    return CircleFunction::power(static_cast<int>(v.real()));
  }
  if (const auto arg = inner_of("inv_shift(")) {
    const ExprPtr e = parse(*arg);
    const cplx a = eval(*e, cplx{1.0, 0.0});
    const cplx b = eval(*e, cplx{-1.0, 0.0});
    if (a != b)
      throw std::invalid_argument("inv_shift(): constant argument required");
    return CircleFunction::inv_shift(a);
  }

  CircleFunction f = CircleFunction::from_source(text);
  const PoleReport report = f.pole_report(CircleGrid::uniform(4096));
  if (!report.pass)
    throw std::invalid_argument(
        "pole check failed: minimum denominator modulus on the circle is " +
        format_float(report.min_denominator_modulus) + " (must exceed 1e-6)");
  return f;
}

int require_order(const CliOptions& o) {
  if (o.order < 0) throw std::invalid_argument("-N (order) required and must be >= 0");
  if (o.order > (1 << 22)) throw std::invalid_argument("-N too large");
  return static_cast<int>(o.order);
}

int resolve_grid_flag(const CliOptions& o) {
  if (o.grid_m < 0) throw std::invalid_argument("--grid-M must be positive");
  return static_cast<int>(o.grid_m);
}

void check_format(const CliOptions& o, std::initializer_list<const char*> allowed) {
  if (o.format.empty()) return;
  for (const char* a : allowed)
    if (o.format == a) return;
  throw std::invalid_argument("unsupported --format '" + o.format +
                              "' for this command");
}

int cmd_verify(const CliOptions& o) {
  check_format(o, {"json"});
  const GeneratedOperator g = resolve_operator(o);
  const UnitarityReport report = verify_unitary(g.op, 16, o.seed);
  emit(o, unitarity_report_json(report));
  if (!report.pass) {
    std::cerr << "verify: unitarity check failed, max residual "
              << format_float(report.max_residual) << "\n";
    return 1;
  }
  return 0;
}

int cmd_moments(const CliOptions& o) {
  check_format(o, {"csv"});
  const int order = require_order(o);
  const GeneratedOperator g = resolve_operator(o);
  const ComplexVec x = resolve_x(o, g.op.dim());
  const ComplexVec y = resolve_y(o, g.op.dim(), x);
  emit(o, moment_table_csv(moment_table(g.op, x, y, order)));
  return 0;
}

int cmd_apply(const CliOptions& o) {
  check_format(o, {"csv"});
  const int order = require_order(o);
  const GeneratedOperator g = resolve_operator(o);
  const CircleFunction f = resolve_function(o.function);
  const ComplexVec v = resolve_x(o, g.op.dim());
  emit(o, vector_csv(fejer_apply(f, g.op, v, order, resolve_grid_flag(o))));
  return 0;
}

int cmd_functional(const CliOptions& o) {
  check_format(o, {"json"});
  const int order = require_order(o);
  const GeneratedOperator g = resolve_operator(o);
  const CircleFunction f = resolve_function(o.function);
  const ComplexVec x = resolve_x(o, g.op.dim());
  const ComplexVec y = resolve_y(o, g.op.dim(), x);
  const int m = resolve_grid_flag(o);

  const FunctionalResult coeff = functional_coeff(f, g.op, x, y, order, m);
  const FunctionalResult quad = functional_quad(f, g.op, x, y, order, m);
  const double difference = std::abs(coeff.value - quad.value);

  std::optional<double> gap_coeff, gap_quad;
  if (g.spectral) {
    const cplx exact = exact_functional(f, *g.spectral, x, y);
    gap_coeff = std::abs(coeff.value - exact);
    gap_quad = std::abs(quad.value - exact);
  }
  emit(o, functional_pair_json(coeff, quad, gap_coeff, gap_quad, difference));

  const double scale =
      x.norm() * y.norm() *
      max_abs_on_grid(f, CircleGrid::uniform(default_fine_grid_size(order)));
  if (difference > 1e-9 * scale) {
    std::cerr << "functional: path self-check failed: |coefficient - quadrature| = "
              << format_float(difference) << " exceeds 1e-9 * " << format_float(scale)
              << "\n";
    return 1;
  }
  return 0;
}

int cmd_density(const CliOptions& o) {
  check_format(o, {"csv"});
  const int order = require_order(o);
  const GeneratedOperator g = resolve_operator(o);
  const ComplexVec x = resolve_x(o, g.op.dim());
  const ComplexVec y = resolve_y(o, g.op.dim(), x);
  int m = resolve_grid_flag(o);
  if (m == 0) m = default_grid_size(order);
  emit(o, density_csv(density(g.op, x, y, order, CircleGrid::uniform(m))));
  return 0;
}

int cmd_convergence(const CliOptions& o) {
  check_format(o, {"csv", "json"});
  if (o.n_list.empty())
    throw std::invalid_argument("--n-list required (comma-separated orders)");
  std::vector<int> orders;
  orders.reserve(o.n_list.size());
  for (long long n : o.n_list) {
    if (n < 0 || n > (1 << 22)) throw std::invalid_argument("--n-list entry out of range");
    orders.push_back(static_cast<int>(n));
  }
  const GeneratedOperator g = resolve_operator(o);
  const CircleFunction f = resolve_function(o.function);
  const ComplexVec x = resolve_x(o, g.op.dim());
  const ComplexVec y = resolve_y(o, g.op.dim(), x);

  std::optional<cplx> exact;
  if (g.spectral) exact = exact_functional(f, *g.spectral, x, y);
  const std::vector<SweepRow> rows = convergence_sweep(f, g.op, x, y, orders, exact);
  emit(o, o.format == "json" ? sweep_json(rows) : sweep_csv(rows));
  return 0;
}

int cmd_oracle(const CliOptions& o) {
  check_format(o, {"json"});
  const GeneratedOperator g = resolve_operator(o);
  const CircleFunction f = resolve_function(o.function);
  const ComplexVec x = resolve_x(o, g.op.dim());
  const ComplexVec y = resolve_y(o, g.op.dim(), x);

  SpectralForm spectral;
  if (g.spectral)
    spectral = *g.spectral;
  else if (g.op.is_dense())
    spectral = recover_spectral(g.op.dense_matrix(), o.seed);
  else
    throw std::invalid_argument("oracle: requires a dense or constructed operator");
  emit(o, exact_value_json(exact_functional(f, spectral, x, y)));
  return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args) {
  CLI::App app{"functions of unitary operators by Fejér summation of operator "
               "Fourier series"};
  app.require_subcommand(1);

  CliOptions o;

  CLI::App* verify = app.add_subcommand("verify", "unitarity report (JSON)");
  add_operator_options(verify, o);
  add_output_options(verify, o);

  CLI::App* moments = app.add_subcommand("moments", "moment table m_k = <U^k x, y> (CSV)");
  add_operator_options(moments, o);
  add_vector_options(moments, o);
  moments->add_option("-N,--order", o.order, "moment order");
  add_output_options(moments, o);

  CLI::App* apply = app.add_subcommand("apply", "(sigma_N f)(U) x (vector CSV)");
  add_operator_options(apply, o);
  add_vector_options(apply, o);
  apply->add_option("--function", o.function, "circle function");
  apply->add_option("-N,--order", o.order, "order");
  apply->add_option("--grid-M", o.grid_m, "Fourier grid size (>= 2N+2)");
  add_output_options(apply, o);

  CLI::App* functional =
      app.add_subcommand("functional", "F^N_{x,y}(f) via both paths (JSON)");
  add_operator_options(functional, o);
  add_vector_options(functional, o);
  functional->add_option("--function", o.function, "circle function");
  functional->add_option("-N,--order", o.order, "order");
  functional->add_option("--grid-M", o.grid_m, "grid size (>= 2N+2)");
  add_output_options(functional, o);

  CLI::App* density_cmd =
      app.add_subcommand("density", "Fejér-smoothed spectral density samples (CSV)");
  add_operator_options(density_cmd, o);
  add_vector_options(density_cmd, o);
  density_cmd->add_option("-N,--order", o.order, "order");
  density_cmd->add_option("--grid-M", o.grid_m, "evaluation grid size (>= 2N+2)");
  add_output_options(density_cmd, o);

  CLI::App* convergence =
      app.add_subcommand("convergence", "functional values across orders (CSV/JSON)");
  add_operator_options(convergence, o);
  add_vector_options(convergence, o);
  convergence->add_option("--function", o.function, "circle function");
  convergence->add_option("--n-list", o.n_list, "comma-separated orders")
      ->delimiter(',');
  convergence->add_option("--grid-M", o.grid_m, "grid size (>= 2N+2)");
  add_output_options(convergence, o);

  CLI::App* oracle_cmd =
      app.add_subcommand("oracle", "exact <f(U)x, y> from the spectral form (JSON)");
  add_operator_options(oracle_cmd, o);
  add_vector_options(oracle_cmd, o);
  oracle_cmd->add_option("--function", o.function, "circle function");
  add_output_options(oracle_cmd, o);

  std::vector<const char*> argv;
  argv.reserve(args.size() + 1);
  argv.push_back("fejcal");
  for (const std::string& a : args) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (verify->parsed()) return cmd_verify(o);
    if (moments->parsed()) return cmd_moments(o);
    if (apply->parsed()) return cmd_apply(o);
    if (functional->parsed()) return cmd_functional(o);
    if (density_cmd->parsed()) return cmd_density(o);
    if (convergence->parsed()) return cmd_convergence(o);
    if (oracle_cmd->parsed()) return cmd_oracle(o);
    std::cerr << "no subcommand selected\n";
    return 1;
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const EvalError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::runtime_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "unexpected error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace fejcal
