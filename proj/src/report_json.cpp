#include "gltower/report_json.hpp"

#include <string>

namespace gltower {

namespace {

Json pair_json(int a, int b) { return Json::array({a, b}); }

Json af_terms(const std::vector<AfTerm>& terms) {
  Json out = Json::array();
  for (const auto& t : terms) {
    Json j;
    j["pos"] = to_json(t.pos);
    j["coeff"] = to_json(t.coeff);
    out.push_back(std::move(j));
  }
  return out;
}

Json patterns(const std::vector<Pattern>& ps) {
  Json out = Json::array();
  for (const auto& p : ps) out.push_back(to_json(p));
  return out;
}

Json one_based(const std::vector<std::vector<int>>& ranges) {
  Json out = Json::array();
  for (const auto& r : ranges) {
    Json inner = Json::array();
    for (int i : r) inner.push_back(i + 1);
    out.push_back(std::move(inner));
  }
  return out;
}

Json seeds_json(const std::vector<std::uint64_t>& seeds) {
  Json out = Json::array();
  for (auto s : seeds) out.push_back(s);
  return out;
}

}  // namespace

Json to_json(const DivisionChain& c) {
  Json j;
  j["pair"] = pair_json(c.n1, c.n2);
  j["remainders"] = c.remainders;
  j["quotients"] = c.quotients;
  j["s"] = c.s();
  j["quotient_sum"] = c.quotient_sum();
  Json slow = Json::array();
  for (const auto& [a, b] : slow_euclid_pairs(c)) slow.push_back(pair_json(a, b));
  j["slow_pairs"] = std::move(slow);
  return j;
}

Json to_json(const Partition& p) { return Json(p.parts()); }

Json to_json(const Position& p) { return pair_json(p.row + 1, p.col + 1); }

Json to_json(const Pattern& p) {
  Json out = Json::array();
  for (const auto& pos : p) out.push_back(to_json(pos));
  return out;
}

Json to_json(const Rational& r) { return to_string(r); }

Json to_json(const finite::Value& v) {
  Json out = Json::array();
  for (const auto& c : v.coeffs()) out.push_back(to_json(c));
  return out;
}

Json to_json(const LemmaReport& r) {
  Json j;
  j["n1"] = r.n1;
  j["n2"] = r.n2;
  j["jordan_type_of_j"] = to_json(r.jordan_type_of_j);
  j["claimed"] = to_json(r.claimed);
  j["richardson"] = to_json(r.richardson);
  j["dim_orbit"] = r.dim_orbit;
  j["dim_df"] = r.dim_df;
  j["all_bullets_ok"] = r.all_bullets_ok;
  j["verdict"] = r.verdict;
  j["diagnostic"] = r.diagnostic;
  return j;
}

Json partition_json(const DivisionChain& c) {
  const Partition claimed = claimed_partition(c);
  const Composition levi = levi_blocks(c);
  const Partition rich = richardson_partition(levi);
  long products = 0;
  for (const auto& [a, b] : slow_euclid_pairs(c)) products += static_cast<long>(a) * b;

  Json j;
  j["pair"] = pair_json(c.n1, c.n2);
  j["quotients"] = c.quotients;
  j["claimed"] = to_json(claimed);
  j["claimed_transpose"] = to_json(transpose(claimed));
  j["levi_blocks"] = levi.blocks();
  j["richardson"] = to_json(rich);
  j["orbit_dim"] = orbit_dim(claimed);
  j["slow_product_sum"] = products;
  j["pass"] = claimed == rich && orbit_dim(claimed) == 2 * products;
  return j;
}

Json tower_json(const Tower& t) {
  Json j;
  j["pair"] = pair_json(t.n1, t.n2);
  j["n"] = t.n();
  j["corner"] = to_string(t.corner);
  j["chain"] = to_json(t.chain);

  bool pass = true;
  Json steps = Json::array();
  for (std::size_t i = 0; i < t.steps.size(); ++i) {
    const auto& st = t.steps[i];
    const auto open = verify_open_orbit(t, i);
    const auto stab = verify_stabilizer_bullet(t, i);
    const bool normal = verify_normal_abelian(t, i);
    pass = pass && open.open && stab.equal && normal && st.dim_v() == st.rows * st.cols;

    Json s;
    s["index"] = st.index;
    s["hom_block"] = pair_json(st.rows, st.cols);
    s["upper_copies"] = one_based(st.upper_copies);
    s["lower_copies"] = one_based(st.lower_copies);
    s["dim_v"] = st.dim_v();
    s["v_basis"] = patterns(st.v_basis);
    s["f_restriction"] = af_terms(st.f_restriction);
    s["dim_p"] = open.dim_p;
    s["open_orbit"] = {{"dim_stabilizer", open.dim_stabilizer},
                       {"dim_characters", open.dim_characters},
                       {"open", open.open}};
    s["stabilizer"] = {{"dim_stabilizer", stab.dim_stabilizer},
                       {"dim_expected", stab.dim_expected},
                       {"expected_inside", stab.expected_inside},
                       {"equal", stab.equal}};
    s["normal_abelian"] = normal;
    steps.push_back(std::move(s));
  }
  j["steps"] = std::move(steps);
  j["final_stabilizer"] = patterns(t.final_stabilizer_basis);
  j["af"] = {{"support", af_terms(t.af.support)}, {"domain_basis", patterns(t.af.domain_basis)}};
  j["dim_df"] = dim_df(t);

  const bool disjoint = entry_disjoint(t);
  const bool closed = bracket_closed(t);
  const bool whittaker = is_whittaker_character(t);
  j["checks"] = {{"entry_disjoint", disjoint}, {"bracket_closed", closed}, {"whittaker", whittaker}};
  // The Whittaker comparison is an assertion only for (n1, 1).
  j["pass"] = pass && disjoint && closed && (t.n2 != 1 || whittaker);
  return j;
}

Json scan_json(int max_n, const std::vector<LemmaReport>& reports) {
  bool all = true;
  Json list = Json::array();
  for (const auto& r : reports) {
    all = all && r.verdict;
    list.push_back(to_json(r));
  }
  Json j;
  j["max_n"] = max_n;
  j["count"] = reports.size();
  j["all_verdicts"] = all;
  j["reports"] = std::move(list);
  return j;
}

Json prop1_json(const finite::FiniteSetting& s, const std::vector<std::uint64_t>& seeds,
                const finite::Prop1Battery& b) {
  Json lhs = Json::array(), rhs = Json::array(), runs = Json::array();
  for (const auto& r : b.runs) {
    lhs.push_back(to_json(r.prop1.lhs));
    rhs.push_back(to_json(r.prop1.rhs));
    Json run;
    run["seed"] = r.seed;
    run["prop1"] = r.prop1.holds;
    run["points"] = r.prop1.points;
    run["witness"] = r.prop1.witness ? Json::array({r.prop1.witness->x.to_string(), r.prop1.witness->y.to_string()})
                                     : Json(nullptr);
    run["fourier_inversion"] = r.fourier_inversion;
    run["f_sum"] = {{"well_defined", r.f_sum.well_defined},
                    {"invariant", r.f_sum.invariant},
                    {"exhaustive", r.f_sum.exhaustive},
                    {"points", r.f_sum.points},
                    {"translations", r.f_sum.translations},
                    {"diagnostic", r.f_sum.diagnostic}};
    runs.push_back(std::move(run));
  }

  Json j;
  j["check"] = "finite-prop1";
  j["pair"] = pair_json(s.n1, s.n2);
  j["q"] = s.q;
  j["chi"] = 0;
  j["seeds"] = seeds_json(seeds);
  j["lhs"] = std::move(lhs);
  j["rhs"] = std::move(rhs);
  j["ratio"] = nullptr;
  j["pass"] = b.pass;
  j["details"] = {{"characters", s.open_orbit.size()},
                  {"cosets", s.orbit_reps.size()},
                  {"stabilizer_matches_p2", b.stabilizer_matches},
                  {"runs", std::move(runs)}};
  return j;
}

Json unfold_json(const finite::FiniteSetting& s, const std::vector<std::uint64_t>& seeds, int chi,
                 const finite::UnfoldBattery& b) {
  Json lhs = Json::array(), rhs = Json::array(), runs = Json::array();
  for (const auto& r : b.runs) {
    const auto& rep = r.report;
    lhs.push_back(to_json(rep.lhs));
    rhs.push_back(to_json(rep.rhs));
    Json run;
    run["seed"] = r.seed;
    run["ratio"] = rep.ratio ? to_json(*rep.ratio) : Json(nullptr);
    run["lhs_average"] = to_json(rep.lhs_average);
    run["rhs_average"] = to_json(rep.rhs_average);
    run["average_ratio"] = rep.average_ratio ? to_json(*rep.average_ratio) : Json(nullptr);
    runs.push_back(std::move(run));
  }

  Json corners = Json::array();
  for (auto c : b.corner_matches) corners.push_back(to_string(c));

  Json j;
  j["check"] = "finite-unfold";
  j["pair"] = pair_json(s.n1, s.n2);
  j["q"] = s.q;
  j["chi"] = chi;
  j["seeds"] = seeds_json(seeds);
  j["lhs"] = std::move(lhs);
  j["rhs"] = std::move(rhs);
  j["ratio"] = b.constant ? to_json(*b.constant) : Json(nullptr);
  j["pass"] = b.constant_ratio;

  Json details;
  if (!b.runs.empty()) {
    const auto& first = b.runs.front().report;
    details["sign"] = to_string(first.sign);
    details["reduced_pair"] = pair_json(first.reduced_n1, first.reduced_n2);
    details["corner"] = to_string(first.corner);
  }
  details["ratio_is_one"] = b.ratio_is_one;
  details["matching_corners"] = std::move(corners);
  details["runs"] = std::move(runs);
  j["details"] = std::move(details);
  return j;
}

}  // namespace gltower
