#pragma once

// JSON serialization of result records.

#include <nlohmann/json.hpp>

#include "bcfdim/augment.hpp"
#include "bcfdim/expansion.hpp"
#include "bcfdim/pressure.hpp"
#include "bcfdim/spectrum.hpp"
#include "bcfdim/tail.hpp"

namespace bcfdim {

nlohmann::json to_json(const Interval& v);
nlohmann::json to_json(const mpq_class& v);
nlohmann::json to_json(const Cutoffs& c);
nlohmann::json to_json(const PressureBracket& b);
nlohmann::json to_json(const DimensionBracket& d);
nlohmann::json to_json(const TailBound& t);
nlohmann::json to_json(const AugmentConstants& c);
nlohmann::json to_json(const SandwichReport& r);
nlohmann::json to_json(const Thm46Result& r);
nlohmann::json to_json(const GreedyStep& s);
nlohmann::json to_json(const SpectrumResult& r);
nlohmann::json to_json(const RegularityResult& r);
nlohmann::json to_json(const GapCertificate& c);
nlohmann::json to_json(const GapReport& r);
nlohmann::json to_json(const RationalInterval& r);
nlohmann::json to_json(const BcfDigits& d);
nlohmann::json to_json(const CfDigits& d);

}  // namespace bcfdim
