#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "varbesov/atoms.hpp"
#include "varbesov/besov.hpp"
#include "varbesov/exponent.hpp"
#include "varbesov/sequence.hpp"

namespace varbesov {

/// Malformed or inconsistent configuration (CLI exit code 2).
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Tolerances {
    double exact = 1e-9;       // slack on inequalities whose constant is exactly 1
    double oracle = 1e-8;      // variable pipeline vs scalar formulas
    double refinement = 0.2;   // relative change of a constant under jfine + 1
    double duality = 0.1;      // relative change of the duality band under jfine + 1
    double band = 1e3;         // declared bound for corpus-banded constants
    double v_growth = 0.2;     // growth of a per-level constant at the finest tested level
    double norm = kDefaultTolerance;
};

/// Named exponent quadruple (alpha, tau, p, q).
struct ExponentSet {
    std::string name;
    ExponentSpec alpha;
    ExponentSpec tau;
    ExponentSpec p;
    ExponentSpec q;

    SpaceParams sample(const Grid& grid) const;
};

struct HarnessConfig {
    int dim = 1;
    int jmax = 3;
    int jfine = 7;
    std::uint64_t seed = 20240607;
    int functions = 20;
    int sequences = 50;
    std::vector<ExponentSet> exponents;  // defaults when empty
    Tolerances tol;
    bool refine = true;  // repeat banded checks on jfine + 1

    Grid grid() const { return Grid(dim, jmax, jfine); }
    std::vector<ExponentSet> exponent_sets() const;
    nlohmann::json echo() const;
};

/// A number (constant) or {kind, c0, c1, center, width, decay_limit}, with the
/// shape parameters optionally nested under "params". Throws ConfigError.
ExponentSpec exponent_spec_from_json(const nlohmann::json& j);
nlohmann::json exponent_spec_to_json(const ExponentSpec& s);

/// Smooth log-Hölder exponent sets: one constant, two variable.
std::vector<ExponentSet> default_exponent_sets(int dim);

/// {grid:{dim,jmax,jfine}, exponents:[{name,alpha,tau,p,q}], corpus:{seed,size,sequences},
/// tolerances:{...}, refine}. An exponent is a number or
/// {kind, c0, c1, center, width, decay_limit}. Throws ConfigError.
HarnessConfig parse_config(const std::string& text);

/// Seeded test data. Functions are finite Fourier sums with modes |xi| < 0.55 2^{band_jfine - 1}
/// (so bands above band_jfine - 2 vanish); the same seed and band_jfine give
/// the same continuous functions on any grid with jfine >= band_jfine.
struct Corpus {
    std::uint64_t seed = 0;
    Grid grid{1, 3, 7};
    int band_jfine = 7;
    std::vector<GridFunction> functions;
    std::vector<std::string> function_kinds;
    std::vector<SequenceCoeffs> sequences;
    std::vector<SpaceParams> exponent_sets;
    std::vector<std::string> exponent_names;

    std::size_t size() const { return functions.size() + sequences.size(); }
};

Corpus make_corpus(const HarnessConfig& cfg, const Grid& grid);
Corpus make_corpus(const HarnessConfig& cfg);

struct CheckReport {
    std::string check_id;
    std::string inequality;         // stated before running
    bool exact_constant = false;    // constant 1 is exact; otherwise corpus-banded
    double bound = 0.0;             // declared bound on every ratio
    double empirical_constant = 0.0;
    double min_ratio = 0.0;
    std::vector<std::string> labels;
    std::vector<double> ratios;
    std::map<std::string, double> metrics;    // stability figures and side quantities
    std::map<std::string, bool> conditions;   // stability and side requirements
    bool pass = false;
    nlohmann::json config;
    std::vector<std::string> notes;

    void add(std::string label, double ratio);
    /// pass = every ratio finite and <= bound, and every condition holds.
    void finalize();
};

nlohmann::json report_to_json(const CheckReport& r);

/// Lemma checks: DHR, r_trick, DHHR_estimate, alm_hasto, key_estimate1, key_lemma,
/// key_lemmasection3, lamda_equi, key_estimate.
std::vector<std::string> lemma_check_ids();
CheckReport run_lemma_check(const std::string& id, const Corpus& corpus, const HarnessConfig& cfg);

/// Embeddings: elem_q, elem_alpha, sobolev, further, sandwich_emd.
std::vector<std::string> embedding_ids();
CheckReport run_embedding(const std::string& id, const Corpus& corpus, const HarnessConfig& cfg);

/// Source and target exponent sets of an embedding; validators throw DomainError
/// naming the first sample where the hypothesis fails.
struct EmbeddingPair {
    SpaceParams source;
    SpaceParams target;
};
void validate_elem_q(const EmbeddingPair& e);
void validate_elem_alpha(const EmbeddingPair& e);
void validate_sobolev(const EmbeddingPair& e);
void validate_further(const EmbeddingPair& e);

/// Variable-exponent pipeline against scalar formulas on constant exponent sets.
CheckReport run_oracle_reduction(const Corpus& corpus, const HarnessConfig& cfg);

/// Remaining property campaigns: luxemburg_closed_form, unit_ball, mixed_dual_route,
/// duality_product, calderon, norm_variants, atomic_round_trip.
std::vector<std::string> property_check_ids();
CheckReport run_property_check(const std::string& id, const Corpus& corpus, const HarnessConfig& cfg);

/// Dispatch over every id above; unknown ids are domain errors.
CheckReport run_check(const std::string& id, const Corpus& corpus, const HarnessConfig& cfg);

/// Writes <dir>/report.json and <dir>/ratios.csv. Only "generated_at" varies between
/// runs with the same seed and configuration.
void emit_report(const std::vector<CheckReport>& reports, const std::string& dir);
nlohmann::json reports_payload(const std::vector<CheckReport>& reports);

// Scalar formulas for constant exponents, independent of the root finder.
namespace scalar {
double modular(const GridFunction& f, double p);
double lp_norm(const GridFunction& f, double p);
/// (sum_v ||f_v||_p^q)^{1/q}.
double mixed_norm(std::span<const GridFunction> fs, double p, double q);
/// sup_P |P|^{-tau} (sum_{v >= v_P^+ - shift} ||f_v chi_P||_p^q)^{1/q}.
double tau_mixed_norm(const LevelFamily& family, double p, double q, double tau, CubeWindow window);
double b_norm(const SequenceCoeffs& lambda, double alpha, double tau, double p, double q,
              std::optional<CubeWindow> window = std::nullopt);
double besov_norm(const GridFunction& f, double alpha, double tau, double p, double q, const TransformPair& pair,
                  std::optional<CubeWindow> window = std::nullopt);
}  // namespace scalar

}  // namespace varbesov
