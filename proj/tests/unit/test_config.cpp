#include <gtest/gtest.h>

#include "fkclock/config.hpp"

namespace fkclock {
namespace {

std::string failure(const ExperimentConfig& c) {
  try {
    c.validate();
  } catch (const std::invalid_argument& e) {
    return e.what();
  }
  return {};
}

TEST(ExperimentConfig, DefaultsDescribeTheBaseChain) {
  const ExperimentConfig c;
  EXPECT_NO_THROW(c.validate());
  EXPECT_EQ(c.coupling, 0.25);
  EXPECT_EQ(c.field, 1.0);
  EXPECT_EQ(c.total_time, 3.0);
  EXPECT_EQ(c.dt(), 1.5);
  const FkConfig fk = c.fk_config();
  EXPECT_EQ(fk.form, SplitForm::Alternating);
  EXPECT_EQ(fk.clock.encoding, Encoding::Gray);
  EXPECT_EQ(fk.initial_state, 0u);
}

TEST(ExperimentConfig, StepFollowsClockWidth) {
  ExperimentConfig c;
  c.n_aux = 4;
  EXPECT_EQ(c.dt(), 3.0 / 8);
  c.total_time = 6.0;
  EXPECT_EQ(c.fk_config().dt, 0.75);
}

TEST(ExperimentConfig, ErrorsNameTheField) {
  ExperimentConfig c;
  c.n_spins = 1;
  EXPECT_NE(failure(c).find("'ns'"), std::string::npos);
  c = {};
  c.depth = 0;
  EXPECT_NE(failure(c).find("'depth'"), std::string::npos);
  c = {};
  c.initial = "012";
  EXPECT_NE(failure(c).find("'initial'"), std::string::npos);
  c = {};
  c.p2 = 1.5;
  EXPECT_NE(failure(c).find("'p2'"), std::string::npos);
  c = {};
  c.optimizer.learning_rate = -1;
  EXPECT_NE(failure(c).find("'lr'"), std::string::npos);
  c = {};
  c.total_time = -1;
  EXPECT_NE(failure(c).find("'te'"), std::string::npos);
}

TEST(ParseBitstring, QubitZeroFirst) {
  EXPECT_EQ(parse_bitstring("100", 3), 0b100u);
  EXPECT_EQ(parse_bitstring("011", 3), 0b011u);
  EXPECT_EQ(parse_bitstring("", 3), 0u);
  EXPECT_THROW(parse_bitstring("01", 3), std::invalid_argument);
  EXPECT_THROW(parse_bitstring("0a1", 3), std::invalid_argument);
}

TEST(AnnealMapping, StringRoundTrip) {
  EXPECT_EQ(anneal_mapping_from_string(to_string(AnnealMapping::Root)), AnnealMapping::Root);
  EXPECT_EQ(anneal_mapping_from_string("linear"), AnnealMapping::Linear);
  EXPECT_THROW(anneal_mapping_from_string("cubic"), std::invalid_argument);
}

}  // namespace
}  // namespace fkclock
