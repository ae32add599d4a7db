#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include "test_common.hpp"
#include "ufb/errors.hpp"
#include "ufb/io.hpp"

using namespace ufb;
using namespace ufb::test;

TEST(Io, BankRoundTrip) {
  const FilterBankSpec fb = experiment2_bank().with_delay(2);
  const FilterBankSpec back = io::bank_from_json(io::bank_to_json(fb));
  EXPECT_EQ(back.decimation(), 3);
  EXPECT_EQ(back.delay(), 2);
  EXPECT_EQ(back.filters(), fb.filters());
}

TEST(Io, ConfigRoundTrip) {
  ExperimentConfig cfg = experiment2_config(77);
  cfg.input = InputModel{InputKind::Shaped, 3.0, taps({1, -0.25})};
  cfg.adaptive.normalization = NlmsNormalization::Joint;
  const ExperimentConfig back = io::config_from_json(io::parse_json(io::config_to_json(cfg).dump()));
  EXPECT_EQ(io::config_to_json(back), io::config_to_json(cfg));
  EXPECT_EQ(back.seed, 77u);
  EXPECT_EQ(back.adaptive.tap_len, 15u);
}

TEST(Io, ConfigDefaults) {
  const auto cfg = io::config_from_json(io::parse_json(R"({"bank": {"M": 2, "filters": [[1], [0, 1]]}})"));
  EXPECT_EQ(cfg.bank.delay(), 0);
  EXPECT_EQ(cfg.adaptive.tap_len, 11u);
  EXPECT_DOUBLE_EQ(cfg.adaptive.step, 0.6);
  EXPECT_EQ(cfg.input.kind, InputKind::White);
}

TEST(Io, SyntaxErrorReportsLocation) {
  try {
    io::parse_json("{\n  \"M\": 2,\n  \"filters\": [1,,]\n}", "bank.json");
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("bank.json"), std::string::npos);
    EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos);
  }
}

TEST(Io, FieldErrorsNameTheField) {
  auto expect_msg = [](const char* text, const char* needle) {
    try {
      io::config_from_json(io::parse_json(text));
      ADD_FAILURE() << "no error for " << text;
    } catch (const ConfigError& e) {
      EXPECT_NE(std::string(e.what()).find(needle), std::string::npos) << e.what();
    }
  };
  expect_msg(R"({})", "bank");
  expect_msg(R"({"bank": {"filters": [[1]]}})", "M");
  expect_msg(R"({"bank": {"M": 1, "filters": [[1, "x"]]}})", "filters[0][1]");
  expect_msg(R"({"bank": {"M": 0, "filters": [[1]]}})", "bank");
  expect_msg(R"({"bank": {"M": 1, "filters": [[1]]}, "step": -1})", "step");
  expect_msg(R"({"bank": {"M": 1, "filters": [[1]]}, "algorithm": "rls"})", "algorithm");
  expect_msg(R"({"bank": {"M": 1, "filters": [[1]]}, "algorithm": 3})", "algorithm");
  expect_msg(R"({"bank": {"M": 1, "filters": [[1]]}, "input": {"model": "pink"}})", "model");
  expect_msg(R"({"bank": {"M": 1, "filters": [[1]]}, "tap_len": 0})", "tap_len");
}

TEST(Io, TraceCsv) {
  AdaptationTrace tr;
  tr.squared_error = {1.5, 0.25};
  tr.component_error = {{1.0, 0.25}, {0.5, 0.0}};
  std::ostringstream os;
  io::write_trace_csv(os, tr);
  EXPECT_EQ(os.str(), "iteration,squared_error,e_0^2,e_1^2\n1,1.5,1,0.5\n2,0.25,0.25,0\n");
}

TEST(Io, TapTableCsvHeaders) {
  TapTable t(2, 2, 2);
  t.at(1, 0, 1) = 0.5;
  std::ostringstream os;
  io::write_tap_table_csv(os, t);
  const std::string s = os.str();
  EXPECT_EQ(s.substr(0, s.find('\n')), "\"a_{1,1}\",\"a_{1,2}\",\"a_{2,1}\",\"a_{2,2}\"");
  EXPECT_NE(s.find("\n0,0,0.5,0\n"), std::string::npos);
}

TEST(Io, BlockedSignalCsv) {
  BlockedSignal v(2, 0);
  v.push_back(std::vector<cd>{1, 2});
  std::ostringstream os;
  io::write_blocked_signal_csv(os, v);
  EXPECT_EQ(os.str(), "n,v0,v1\n0,1,2\n");
}

TEST(Io, WienerJsonShape) {
  const auto j = io::wiener_to_json(wiener_solve(experiment1_bank(), InputPSD::white()));
  EXPECT_EQ(j["M"], 2);
  EXPECT_EQ(j["L"], 2);
  EXPECT_TRUE(j["stable"].get<bool>());
  EXPECT_EQ(j["entries"].size(), 2u);
  EXPECT_EQ(j["poles"].size(), 1u);
  // delta is det S_vv itself: paraconjugate symmetric, (50 - 17z^-1) times its mirror.
  const LaurentPoly delta = LaurentPoly::from_text(j["delta"].get<std::string>());
  EXPECT_EQ(delta.coeffs().size(), 3u);
  EXPECT_LE(relative_difference(lp_paraconjugate(delta).shifted(-2), delta), 1e-12);
  EXPECT_TRUE(j.contains("reduced"));
}

TEST(Io, OutputDirectoryGuard) {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "ufb_io_guard";
  fs::remove_all(dir);
  io::prepare_output_dir(dir, false);
  EXPECT_TRUE(fs::is_directory(dir));
  io::prepare_output_dir(dir, false);  // empty is fine
  std::ofstream(dir / "x") << "x";
  EXPECT_THROW(io::prepare_output_dir(dir, false), ConfigError);
  EXPECT_NO_THROW(io::prepare_output_dir(dir, true));
  fs::remove_all(dir);
}
