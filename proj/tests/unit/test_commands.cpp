#include <gtest/gtest.h>

#include <string>

#include "reclab/commands.hpp"
#include "reclab/error.hpp"

using namespace reclab;
using nlohmann::json;

namespace {

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return static_cast<ErrorCode>(0);
}

}  // namespace

TEST(Words, Specs) {
  EXPECT_EQ(parse_word("0110"), (Word{0, 1, 1, 0}));
  EXPECT_EQ(parse_word(json::array({2, 0, 1})), (Word{2, 0, 1}));
  EXPECT_EQ(parse_word("[3,1]"), (Word{3, 1}));
  EXPECT_EQ(parse_word("ones:4"), ones(4));
  EXPECT_EQ(parse_word("thue-morse:8"), Word::parse("01101001"));
  EXPECT_THROW(parse_word("ones:0"), Error);
  EXPECT_THROW(parse_word("squares:3"), Error);
}

TEST(Words, Digits) {
  EXPECT_EQ(digits_word(10, 5, "pi"), Word::parse("14159"));
  EXPECT_EQ(digits_word(10, 4, "e"), Word::parse("7182"));
  EXPECT_EQ(digits_word(10, 4, "sqrt2"), Word::parse("4142"));
  EXPECT_EQ(digits_word(10, 4, "phi"), Word::parse("6180"));
  EXPECT_EQ(digits_word(10, 4, "ln2"), Word::parse("6931"));
  EXPECT_EQ(digits_word(2, 6, "1/3"), Word::parse("010101"));
  EXPECT_EQ(digits_word(2, 4, "0.75"), Word::parse("1100"));
  EXPECT_EQ(digits_word(3, 3, "1/2"), Word::parse("111"));
  // pi in binary: 11.001001000011111101...
  EXPECT_EQ(digits_word(2, 12, "pi"), Word::parse("001001000011"));
  EXPECT_EQ(parse_word("digits:10:3:pi"), Word::parse("141"));
  EXPECT_THROW(digits_word(1, 3, "pi"), Error);
  EXPECT_THROW(digits_word(10, 400, "pi"), Error);
  EXPECT_THROW(digits_word(10, 3, "tau"), Error);
}

TEST(Models, Presets) {
  EXPECT_EQ(parse_model("uniform-binary")->to_json(), (json{{"type", "bernoulli"}, {"probs", {0.5, 0.5}}}));
  EXPECT_EQ(parse_model("uniform:4")->alphabet_size(), 4u);
  EXPECT_EQ(parse_model("bernoulli:0.4,0.6")->to_json()["probs"], json({0.4, 0.6}));
  EXPECT_EQ(parse_model("xor:0.75")->kind(), MeasureKind::xor_coupled);
  EXPECT_EQ(parse_model(json{{"type", "markov"}, {"transition", {{0.9, 0.1}, {0.2, 0.8}}}})->kind(), MeasureKind::markov);
  EXPECT_THROW(parse_model("gaussian"), Error);
  EXPECT_THROW(parse_model("bernoulli:0.4,0.7"), Error);
}

TEST(Lists, RangesAndGrids) {
  EXPECT_EQ(parse_index_list("3..6"), (std::vector<std::uint64_t>{3, 4, 5, 6}));
  EXPECT_EQ(parse_index_list(7), (std::vector<std::uint64_t>{7}));
  EXPECT_EQ(parse_index_list(json::array({2, 9})), (std::vector<std::uint64_t>{2, 9}));
  const auto grid = parse_grid("0.25..1:0.25");
  ASSERT_EQ(grid.size(), 4u);
  EXPECT_DOUBLE_EQ(grid.back(), 1.0);
  EXPECT_EQ(parse_grid("0.25..3:0.25").size(), 12u);
  EXPECT_THROW(parse_grid("1..2:0"), Error);
  EXPECT_THROW(parse_index_list("6..3"), Error);
}

TEST(Commands, AnalyzeReport) {
  const json r = run_command("analyze", {{"word", "ones:10"}, {"recurrence", {{"d", {1, 2}}, {"t", 1.0}}}});
  EXPECT_EQ(r["principal_period"], 1);
  EXPECT_EQ(r["kappa"], 1);
  EXPECT_EQ(r["horizon"], 1048576);
  EXPECT_EQ(r["g"], 10);
  EXPECT_EQ(r["gamma_n"], 20);
  EXPECT_EQ(r["config"]["model"], "uniform-binary");
  EXPECT_EQ(run_command("analyze", {{"word", "101"}})["principal_period"], 2);
  // Deterministic model: no positive decay rate, reported as null.
  EXPECT_TRUE(run_command("analyze", {{"word", "1"}, {"model", "bernoulli:0,1"}})["decay_rate"].is_null());
}

TEST(Commands, HorizonIsExactForDyadicProbabilities) {
  // P(A) = 2^-12 must give N = 4096, not the floor of a value rounded just below it.
  EXPECT_EQ(run_command("simulate", {{"word", "thue-morse:12"}, {"trials", 1}, {"seed", 1}})["horizon"], 4096);
  EXPECT_EQ(run_command("simulate", {{"word", "thue-morse:7"}, {"recurrence", {{"d", {1, 2}}, {"t", 1.0}}}, {"trials", 1},
                                     {"seed", 1}})["horizon"],
            16384);
}

TEST(Commands, ConfigValidation) {
  EXPECT_EQ(code_of([] { run_command("simulate", {{"word", "1"}}); }), ErrorCode::invalid_input);
  EXPECT_EQ(code_of([] { run_command("analyze", {{"word", "1"}, {"colour", 3}}); }), ErrorCode::invalid_input);
  EXPECT_EQ(code_of([] { run_command("fly", json::object()); }), ErrorCode::invalid_input);
  EXPECT_EQ(code_of([] { run_command("analyze", {{"word", "1"}, {"command", "simulate"}}); }),
            ErrorCode::invalid_input);
  EXPECT_EQ(code_of([] { run_command("simulate", {{"word", "ones:40"}, {"seed", 1}}); }),
            ErrorCode::horizon_too_large);
  EXPECT_EQ(code_of([] { run_command("nonconv", {{"p1", 0.5}, {"seed", 1}, {"trials", 10}}); }),
            ErrorCode::degenerate_parameters);
  EXPECT_TRUE(needs_seed("compare"));
  EXPECT_FALSE(needs_seed("bounds"));
  EXPECT_EQ(command_names().size(), 7u);
}

TEST(Commands, EchoedConfigReproducesReport) {
  const std::vector<std::pair<std::string, json>> runs{
      {"simulate", {{"word", "1"}, {"recurrence", {{"d", {1, 2}}, {"t", 1.0}}}, {"n_terms", 2}, {"trials", 500}, {"seed", 4}}},
      {"compare", {{"word", "ones:6"}, {"model", "bernoulli:0.4,0.6"}, {"target", {{"kind", "polya-aeppli"}}}, {"trials", 300}, {"seed", 2}}},
      {"nonconv", {{"n", "4..5"}, {"trials", 200}, {"seed", 8}}},
      {"hitting", {{"word", "1000"}, {"grid", "0..2:0.5"}, {"trials", 200}, {"seed", 8}}},
      {"entropy", {{"n", "3..4"}, {"trials", 100}, {"seed", 8}}},
      {"bounds", {{"n", 30}, {"r", 2}}},
  };
  for (const auto& [command, config] : runs) {
    const json first = run_command(command, config);
    const std::string text = dump_report(first);
    EXPECT_EQ(dump_report(run_command(command, config)), text) << command;
    EXPECT_EQ(dump_report(run_command(command, first["config"])), text) << command;
    EXPECT_FALSE(report_to_csv(first).empty()) << command;
  }
}

TEST(Commands, CompareTargets) {
  const json poisson = run_command("compare", {{"word", "thue-morse:6"}, {"trials", 2000}, {"seed", 1}});
  EXPECT_EQ(poisson["bound"]["name"], "thm21");
  const json exact = run_command(
      "compare", {{"word", "1"}, {"recurrence", {{"d", {1, 2}}, {"t", 1.0}}}, {"n_terms", 2}, {"target", {{"kind", "exact"}}},
                  {"trials", 2000}, {"seed", 1}});
  EXPECT_NEAR(exact["target"]["mass"][0].get<double>(), 0.625, 1e-12);
  EXPECT_LT(exact["tv"].get<double>(), 0.05);
  const json compound = run_command(
      "compare", {{"word", "ones:5"}, {"target", {{"kind", "compound"}, {"s", 0.5}, {"cluster", {0.0, 0.5, 0.5}}}},
                  {"trials", 200}, {"seed", 1}});
  EXPECT_EQ(compound["bound"]["name"], "thm23");
}

TEST(Commands, BoundsPresetsAndOverrides) {
  const json all = run_command("bounds", {{"n", 10}, {"r", 1}});
  EXPECT_EQ(all["bounds"].size(), 4u);
  const json one = run_command("bounds", {{"n", 10}, {"r", 1}, {"preset", "thm26"}});
  EXPECT_NEAR(one["bounds"][0]["value"].get<double>(), 5.599862995198502e+34, 1e21);
  EXPECT_EQ(code_of([] {
              run_command("bounds", {{"n", 30}, {"preset", "thm21"}, {"overrides", {{"psin", 0.3}, {"psi0", 0.3}, {"ell", 2}}}});
            }),
            ErrorCode::hypothesis_failed);
  EXPECT_EQ(code_of([] { run_command("bounds", {{"n", 30}, {"overrides", {{"bogus", 1}}}}); }), ErrorCode::invalid_input);
}

TEST(Commands, CsvViews) {
  const json r = run_command("nonconv", {{"n", "4..5"}, {"trials", 100}, {"seed", 3}});
  const std::string csv = report_to_csv(r);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "n,horizon,theta,limit");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 3);
}
