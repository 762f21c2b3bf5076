#include <sstream>

#include "doctest.h"
#include "repack/errors.hpp"
#include "repack/feasibility.hpp"
#include "repack/sat_solver.hpp"
#include "support.hpp"

using namespace repack;

namespace {

Station station(std::uint32_t id, std::vector<int> channels) {
  Station s;
  s.id = StationId{id};
  for (int c : channels) s.domain.push_back(Channel{c});
  s.pre_auction_channel = s.domain.front();
  s.population = 1000;
  return s;
}

InterferenceConstraint co(std::uint32_t a, int ca, std::uint32_t b, int cb) {
  return InterferenceConstraint({StationId{a}, Channel{ca}}, {StationId{b}, Channel{cb}});
}

const ChannelRange kUhf{Channel{14}, Channel{36}};
const Budget kBudget = Budget::steps(kDefaultStepBudget);

// s1 can move from 14 to 15; s2 only fits on 14.
Instance incompleteness_instance() {
  return Instance({station(1, {14, 15}), station(2, {14})}, {co(1, 14, 2, 14)}, kUhf);
}

}  // namespace

TEST_CASE("solve_cnf basics") {
  CHECK(solve_cnf(0, {}, kBudget).status == SolveStatus::Sat);
  const std::vector<Clause> contradiction{{1}, {-1}};
  CHECK(solve_cnf(1, contradiction, kBudget).status == SolveStatus::Unsat);
  const std::vector<Clause> empty_clause{{}};
  CHECK(solve_cnf(2, empty_clause, kBudget).status == SolveStatus::Unsat);
  const std::vector<Clause> tautology{{1, -1}, {2}};
  const auto r = solve_cnf(2, tautology, kBudget);
  REQUIRE(r.status == SolveStatus::Sat);
  CHECK(r.model[2]);
  CHECK_THROWS_AS(solve_cnf(1, std::vector<Clause>{{3}}, kBudget), StructuralError);
  CHECK_THROWS_AS(solve_cnf(1, {}, Budget{}), StructuralError);
}

TEST_CASE("solve_cnf honors preferred phases") {
  const std::vector<Clause> either{{1, 2}};
  const auto neg = solve_cnf(2, either, kBudget, {false, false, true});
  REQUIRE(neg.status == SolveStatus::Sat);
  CHECK_FALSE(neg.model[1]);
  CHECK(neg.model[2]);
  const auto pos = solve_cnf(2, either, kBudget, {false, true, false});
  CHECK(pos.model[1]);
}

TEST_CASE("solve_cnf matches a truth table on random 3-CNF") {
  Rng rng(2024);
  int sat = 0;
  int unsat = 0;
  for (int i = 0; i < 1000; ++i) {
    const int clauses = static_cast<int>(rng.uniform_int(40, 120));
    const auto f = testing::random_3cnf(rng, 20, clauses);
    const bool expected = testing::truth_table_sat(20, f);
    const auto r = solve_cnf(20, f, Budget::steps(1'000'000));
    REQUIRE(r.status != SolveStatus::Timeout);
    CHECK((r.status == SolveStatus::Sat) == expected);
    if (r.status == SolveStatus::Sat) {
      CHECK(testing::model_satisfies(r.model, f));
      ++sat;
    } else {
      ++unsat;
    }
  }
  // both outcomes must be exercised for the comparison to mean anything
  CHECK(sat > 100);
  CHECK(unsat > 100);
}

TEST_CASE("solve_cnf step budget") {
  // pigeonhole 13 -> 12 is far beyond a 10-step budget or a few milliseconds
  const int holes = 12;
  const int pigeons = 13;
  auto var = [&](int p, int h) { return p * holes + h + 1; };
  std::vector<Clause> php;
  for (int p = 0; p < pigeons; ++p) {
    Clause c;
    for (int h = 0; h < holes; ++h) c.push_back(var(p, h));
    php.push_back(c);
  }
  for (int h = 0; h < holes; ++h) {
    for (int p = 0; p < pigeons; ++p) {
      for (int q = p + 1; q < pigeons; ++q) php.push_back({-var(p, h), -var(q, h)});
    }
  }
  const auto r = solve_cnf(pigeons * holes, php, Budget::steps(10));
  CHECK(r.status == SolveStatus::Timeout);
  CHECK(r.stats.decisions <= 10);
  const auto timed = solve_cnf(pigeons * holes, php, Budget::wall_clock(std::chrono::milliseconds(5)));
  CHECK(timed.status == SolveStatus::Timeout);
}

TEST_CASE("check_greedy") {
  const ClearingTarget ct{Channel{29}};
  SUBCASE("empty reduced domain") {
    const Instance inst({station(1, {30})}, {}, kUhf);
    CHECK(check_greedy({StationId{1}, {}, inst, ct}, kBudget).kind == Verdict::Timeout);
  }
  SUBCASE("nothing packed") {
    const Instance inst({station(1, {15, 16})}, {}, kUhf);
    const auto v = check_greedy({StationId{1}, {}, inst, ct}, kBudget);
    REQUIRE(v.kind == Verdict::Feasible);
    CHECK(v.certificate == Assignment{{StationId{1}, Channel{15}}});
  }
  SUBCASE("incompleteness") {
    const Instance inst = incompleteness_instance();
    const FeasibilityProblem p{StationId{2}, {{StationId{1}, Channel{14}}}, inst, ct};
    CHECK(check_greedy(p, kBudget).kind == Verdict::Timeout);
    const auto oracle = check_exhaustive(p);
    REQUIRE(oracle.kind == Verdict::Feasible);
    CHECK(oracle.certificate == Assignment{{StationId{1}, Channel{15}}, {StationId{2}, Channel{14}}});
  }
}

TEST_CASE("encode_packing") {
  const ClearingTarget ct{Channel{29}};
  SUBCASE("one station, two channels") {
    const Instance inst({station(1, {14, 15})}, {}, kUhf);
    const StationId ids[] = {StationId{1}};
    const auto f = encode_packing(inst, ct, ids);
    CHECK(f.num_vars() == 2);
    CHECK(f.clauses.size() == 1);
  }
  SUBCASE("two stations sharing one channel") {
    const Instance inst({station(1, {14}), station(2, {14})}, {co(1, 14, 2, 14)}, kUhf);
    const StationId ids[] = {StationId{1}, StationId{2}};
    const auto f = encode_packing(inst, ct, ids);
    CHECK(f.num_vars() == 2);
    CHECK(f.clauses.size() == 3);
    CHECK(f.variable({StationId{2}, Channel{14}}) == 2);
    CHECK(f.variable({StationId{2}, Channel{15}}) == 0);
    CHECK_FALSE(testing::truth_table_sat(f.num_vars(), f.clauses));
    CHECK(solve(f, kBudget, {}).status == SolveStatus::Unsat);
  }
  SUBCASE("DIMACS export") {
    const Instance inst({station(1, {14}), station(2, {14})}, {co(1, 14, 2, 14)}, kUhf);
    const StationId ids[] = {StationId{1}, StationId{2}};
    std::ostringstream out;
    write_dimacs(out, encode_packing(inst, ct, ids));
    const std::string text = out.str();
    CHECK(text.find("p cnf 2 3") != std::string::npos);
    CHECK(text.find("-1 -2 0") != std::string::npos);
  }
}

TEST_CASE("check_sat") {
  const ClearingTarget ct{Channel{29}};
  SUBCASE("repacks to admit the target") {
    const Instance inst = incompleteness_instance();
    const auto v = check_sat({StationId{2}, {{StationId{1}, Channel{14}}}, inst, ct}, kBudget);
    REQUIRE(v.kind == Verdict::Feasible);
    CHECK(v.certificate == Assignment{{StationId{1}, Channel{15}}, {StationId{2}, Channel{14}}});
  }
  SUBCASE("empty reduced domain is infeasible") {
    const Instance inst({station(1, {30})}, {}, kUhf);
    CHECK(check_sat({StationId{1}, {}, inst, ct}, kBudget).kind == Verdict::Infeasible);
  }
  SUBCASE("keeps packed channels when they still work") {
    const Instance inst({station(1, {14, 15}), station(2, {14, 15}), station(3, {14, 15})},
                        {co(1, 14, 2, 14)}, kUhf);
    const auto v =
        check_sat({StationId{3}, {{StationId{1}, Channel{15}}, {StationId{2}, Channel{14}}}, inst, ct}, kBudget);
    REQUIRE(v.feasible());
    CHECK(v.certificate.find(StationId{1}) == Channel{15});
    CHECK(v.certificate.find(StationId{2}) == Channel{14});
  }
  SUBCASE("invalid problems") {
    const Instance inst = incompleteness_instance();
    CHECK_THROWS_AS(check_sat({StationId{5}, {}, inst, ct}, kBudget), StructuralError);
    CHECK_THROWS_AS(check_sat({StationId{1}, {{StationId{1}, Channel{14}}}, inst, ct}, kBudget),
                    StructuralError);
  }
}

TEST_CASE("check_exhaustive") {
  const ClearingTarget ct{Channel{29}};
  const Instance single({station(1, {14})}, {}, kUhf);
  CHECK(check_exhaustive({StationId{1}, {}, single, ct}).kind == Verdict::Feasible);
  const Instance clash({station(1, {14}), station(2, {14})}, {co(1, 14, 2, 14)}, kUhf);
  CHECK(check_exhaustive({StationId{2}, {{StationId{1}, Channel{14}}}, clash, ct}).kind == Verdict::Infeasible);

  SUBCASE("refuses oversized search spaces") {
    std::vector<Station> many;
    std::vector<int> wide;
    for (int c = 14; c <= 28; ++c) wide.push_back(c);
    for (std::uint32_t i = 1; i <= 8; ++i) many.push_back(station(i, wide));
    const Instance big(many, {}, kUhf);
    Assignment packed;
    for (std::uint32_t i = 2; i <= 8; ++i) packed.assign(StationId{i}, Channel{13 + static_cast<int>(i)});
    CHECK_THROWS_AS(check_exhaustive({StationId{1}, packed, big, ct}), ResourceError);
  }
}

TEST_CASE("checkers agree with each other and with the definition") {
  Rng rng(99);
  for (int trial = 0; trial < 400; ++trial) {
    const Instance inst = testing::random_small_instance(rng);
    const ClearingTarget ct{Channel{static_cast<int>(rng.uniform_int(2, 5))}};
    const auto ids = testing::all_ids(inst);
    const StationId target = ids[static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(ids.size()) - 1))];
    std::vector<StationId> others;
    for (StationId s : ids) {
      if (s != target) others.push_back(s);
    }
    const FeasibilityProblem p{target, testing::random_packed(rng, inst, ct, others), inst, ct};

    const auto greedy = check_greedy(p, kBudget);
    const auto sat = check_sat(p, kBudget);
    const auto exhaustive = check_exhaustive(p);
    CHECK(greedy.kind != Verdict::Infeasible);
    CHECK(sat.kind == exhaustive.kind);
    if (greedy.feasible()) CHECK(sat.feasible());
    for (const auto* v : {&greedy, &sat, &exhaustive}) {
      if (!v->feasible()) continue;
      CHECK(testing::brute_valid(inst, v->certificate, ct));
      CHECK(v->certificate.contains(target));
      for (StationId s : p.packed.stations()) CHECK(v->certificate.contains(s));
      CHECK(v->certificate.size() == p.packed.size() + 1);
    }
    // determinism under step budgets
    const auto again = check_sat(p, kBudget);
    CHECK(again.kind == sat.kind);
    CHECK(again.certificate == sat.certificate);
  }
}

TEST_CASE("checker names") {
  CHECK(parse_checker("greedy") == CheckerKind::Greedy);
  CHECK(parse_checker("sat") == CheckerKind::Sat);
  CHECK(parse_checker("exhaustive") == CheckerKind::Exhaustive);
  CHECK_THROWS_AS(parse_checker("satfc"), StructuralError);
  CHECK(to_string(Verdict::Timeout) == "timeout");
}
