#pragma once

// Stage runners behind the command-line tool: each stage measures, compares against the configured
// thresholds and emits CSV tables. The measure_* functions carry no thresholds and are shared with
// the acceptance suite.

#include <map>
#include <string>
#include <vector>

#include "kummer/cohomled.hpp"
#include "kummer/config.hpp"
#include "kummer/forms.hpp"
#include "kummer/masolver.hpp"

namespace kummer {

// ---------------------------------------------------------------------------------------------
// Measurements

struct Classification {
  std::vector<SingularPoint> points;
  K3Count count;
  /// Multiplicity per group label (Z2, Z4, BD8, ...).
  std::map<std::string, int> groups;
  std::map<std::string, int> ade;
};
Classification measure_classification(const LatticeGroupPair& pair);

/// Each expected point lands on exactly one enumerated orbit carrying the expected group label.
bool expected_points_match(const LatticeGroupPair& pair, const Classification& c,
                           const std::vector<ExpectedPoint>& expected);

struct EHMeasure {
  /// sup relative error of the integrated phi' against the closed form.
  double ode_error = 0.0;
  double ricci_residual = 0.0;
  int nodes = 0;
};
EHMeasure measure_eh(double a, const RadialGrid& grid);

struct ASDMeasure {
  double l11 = 0.0;
  double calibration = 0.0;
  double pairing = 0.0;
  /// Max pointwise anti-self-duality residual of i ddbar psi and of i ddbar nu_alpha in the EH metric.
  double pointwise = 0.0;
  int samples = 0;
};
ASDMeasure measure_asd(double a, int samples, unsigned seed);

struct GluingMeasure {
  SweepReport k0, k1;
  /// sup |f_eps| / eps^2 per epsilon.
  std::vector<double> f_ratio;
  double f_spread = 0.0;
};
GluingMeasure measure_gluing(const ALEModel& model, const std::vector<double>& eps_list, int n);

struct MAMeasure {
  std::vector<MASweep> sweeps;
  double max_ratio = 0.0;
  double max_residual = 0.0;
};
MAMeasure measure_masolver(const ALEModel& model, const std::vector<double>& eps_list,
                           const std::vector<double>& deltas, int n);

struct FormsMeasure {
  DecayTable bubble;
  std::vector<DecayTable> torus;
};
FormsMeasure measure_forms(const ALEModel& model, const std::vector<double>& eps_list);

struct BubblingMeasure {
  SweepReport torus, bubble;
};
BubblingMeasure measure_bubbling(const ALEModel& model, const std::vector<double>& eps_list, int n);

struct LedgerMeasure {
  int dimension = 0, asd_dimension = 0;
  bool cup_table = true;
  bool gram_display = true;
  bool gram_positive = true;
  bool gram_negative_cup = true;
  bool w_exact = true;
  bool minus_independent = true;
  /// First epsilon at which the -cup identity broke, if any.
  std::string first_mismatch;
};
/// Compares the ledger against independently assembled tables.
LedgerMeasure measure_ledger(const IntersectionData& data, const std::vector<Rational>& eps_list);

/// Intersection data for a config: basis from the orbifold, vol_T from the config or the lattice.
IntersectionData ledger_data(const RunConfig& config);

// ---------------------------------------------------------------------------------------------
// Stage results

struct CheckRow {
  std::string name;
  std::string measured;
  std::string target;
  bool pass = false;
};

struct CsvTable {
  std::string file;
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

struct StageResult {
  std::string stage;
  /// What the stage checks, cited in the report.
  std::string anchor;
  std::vector<CheckRow> checks;
  std::vector<std::string> notes;
  std::vector<CsvTable> tables;
  std::string error;
  double seconds = 0.0;

  bool pass() const;
};

/// Runs one stage; exceptions from the numerics are captured in StageResult::error.
StageResult run_stage(const RunConfig& config, const std::string& stage);
std::vector<StageResult> run_stages(const RunConfig& config);

/// 12 significant digits.
std::string csv_number(double v);
std::string csv_text(const CsvTable& table);
/// Writes every table of the results into dir, creating it if needed.
void write_tables(const std::string& dir, const std::vector<StageResult>& results);
/// Structured report; runtimes appear only in the stage header lines.
std::string verification_report(const RunConfig& config, const std::vector<StageResult>& results);

}  // namespace kummer
