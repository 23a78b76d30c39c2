#pragma once

// Report serialisation. JSON reports carry the tool version and a hash of
// the run configuration; floats are rounded to 12 significant digits so
// identical runs give byte-identical output. CSV tables are plot-ready.

#include <string>

#include "json.hpp"
#include "l2approx/algnum.hpp"
#include "l2approx/asymptotics.hpp"
#include "l2approx/char_moments.hpp"
#include "l2approx/char_p.hpp"

namespace l2approx {

inline constexpr const char* kToolVersion = "1.0.0";
using Json = nlohmann::ordered_json;

double round_sig(double v, int digits = 12);
// 64-bit FNV-1a of the text, as 16 hex digits.
std::string fnv1a_hex(const std::string& text);

// {"tool", "version", "command", "config_hash", "config", "result"}.
Json envelope(const std::string& command, const Json& config, Json result);
// Rounds every float, then dumps with two-space indentation and a newline.
std::string dump_json(const Json& j);

Json to_json(const PolicyValue& v);
Json to_json(const GrowthProcess& p, const AsymptoticReport& r);
Json to_json(const BoundCheckReport& r);
Json to_json(const DecompositionReport& r);
Json to_json(const DensityComparison& r);
Json to_json(const CurveScanReport& r);
Json to_json(const DensityBracket& b);
Json to_json(const RouteComparison& r);
Json to_json(const FpBettiSequence& s);
Json to_json(const MonotonicityReport& r);
Json to_json(const InequalityReport& r);
Json to_json(const LemmaAReport& r);
Json to_json(const UnitCircleReport& r);
Json to_json(const ConditionFReport& r);
Json to_json(const QuarticFactorCheck& r);
Json to_json(Complex z);
Json to_json(const Rational& q);  // "p/q" text keeps exactness

// level,label,mu,chain_dim,betti,normalized_betti
std::string csv_levels(const GrowthProcess& p);
// level,eigenvalue,multiplicity (exact zeros included)
std::string csv_spectrum(const GrowthProcess& p);
// level,lambda,normalized_count with normalized_count = F^n(lambda^2)
std::string csv_density(const GrowthProcess& p, const LambdaGrid& grid);
// t,lambda,G,G_plus,small_mass
std::string csv_grid(const AsymptoticReport& r);
// lambda,lower,estimate,upper[,direct]
std::string csv_bracket(const DensityBracket& b, const std::vector<double>* direct = nullptr);
// level,index,fp_betti,rational_betti,normalized
std::string csv_fp(const FpBettiSequence& s);
// t,dim
std::string csv_curve(const CurveScanReport& r);

// Shortest text that reads back as the same double after 12-digit rounding.
std::string csv_number(double v);

}  // namespace l2approx
