// io.hpp — file formats (Matrix Market, vector CSV, result JSON/CSV),
// builtin operator generators, and the command-line driver.

#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "fejcal/calculus.hpp"
#include "fejcal/core.hpp"
#include "fejcal/moments.hpp"

namespace fejcal {

class IoError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Reads "%%MatrixMarket matrix coordinate|array complex general" files,
/// 1-based coordinate indices, unspecified coordinate entries zero, square
/// matrices only. Throws IoError with a specific message otherwise.
DenseMatrix read_matrix_market(const std::string& path);
void write_matrix_market(const std::string& path, const DenseMatrix& m,
                         bool coordinate = true);

/// One "re,im" pair per line; blank lines and lines starting with '#' are
/// skipped. Parse failures report the 1-based line number.
ComplexVec read_vector_csv(const std::string& path);
void write_vector_csv(const std::string& path, const ComplexVec& v);

/// 17-significant-digit formatting used for every float the tool emits, so
/// identical invocations produce byte-identical output.
std::string format_float(double v);

std::string moment_table_csv(const MomentTable& table);
std::string density_csv(const DensityEstimate& est);
std::string vector_csv(const ComplexVec& v);
std::string unitarity_report_json(const UnitarityReport& report);
std::string functional_result_json(const FunctionalResult& r,
                                   std::optional<double> oracle_gap);
std::string functional_pair_json(const FunctionalResult& coeff,
                                 const FunctionalResult& quad,
                                 std::optional<double> gap_coeff,
                                 std::optional<double> gap_quad,
                                 double difference);
std::string sweep_csv(const std::vector<SweepRow>& rows);
std::string sweep_json(const std::vector<SweepRow>& rows);
std::string exact_value_json(cplx value);

std::string spectral_form_json(const SpectralForm& s);
SpectralForm parse_spectral_form_json(const std::string& text);
SpectralForm read_spectral_json(const std::string& path);
void write_spectral_json(const std::string& path, const SpectralForm& s);

/// Builtin operator sources for the CLI and tests. Names: identity, shift,
/// dft-diagonal, random-diagonal, constructed-spectrum. Diagonal and
/// constructed operators also carry their spectral forms.
struct GeneratedOperator {
  UnitaryOperator op;
  std::optional<SpectralForm> spectral;
};
GeneratedOperator generate_operator(const std::string& name, std::size_t dim,
                                    std::uint64_t seed);

/// Runs one CLI invocation (arguments without the program name). Exit codes:
/// 0 success, 1 validation failure, 2 I/O or parse error.
int run_cli(const std::vector<std::string>& args);

}  // namespace fejcal
