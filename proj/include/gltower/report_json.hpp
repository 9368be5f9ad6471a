#pragma once

// JSON shapes for every report the CLI prints. Matrix positions are 1-based,
// rationals are strings ("-3/4"), and a cyclotomic value is the array of its
// rational coefficients on 1, zeta, ..., zeta^(q-2). Key order is fixed.

#include <cstdint>
#include <vector>

#include <json.hpp>

#include "gltower/euclid.hpp"
#include "gltower/finite/model.hpp"
#include "gltower/orbit_lemma.hpp"
#include "gltower/tower.hpp"

namespace gltower {

using Json = nlohmann::ordered_json;

Json to_json(const DivisionChain& c);
Json to_json(const Partition& p);
Json to_json(const Position& p);
Json to_json(const Pattern& p);
Json to_json(const Rational& r);
Json to_json(const finite::Value& v);
Json to_json(const LemmaReport& r);

/// Claimed partition, Levi blocks, Richardson partition and orbit dimensions.
Json partition_json(const DivisionChain& c);

/// Tower with per-step checks; "pass" is the conjunction of every check.
Json tower_json(const Tower& t);

Json scan_json(int max_n, const std::vector<LemmaReport>& reports);

Json prop1_json(const finite::FiniteSetting& s, const std::vector<std::uint64_t>& seeds,
                const finite::Prop1Battery& b);

Json unfold_json(const finite::FiniteSetting& s, const std::vector<std::uint64_t>& seeds, int chi,
                 const finite::UnfoldBattery& b);

}  // namespace gltower
