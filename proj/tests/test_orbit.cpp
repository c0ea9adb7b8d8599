#include <gtest/gtest.h>

#include <map>
#include <set>
#include <string>

#include "oracles.hpp"
#include "tarski/orbit.hpp"

using namespace tarski;

namespace {

RationalRay ray(long x, long y, long z) { return RationalRay(Integer(x), Integer(y), Integer(z)); }

}  // namespace

TEST(Orbit, EntriesMatchMatrixAction) {
  const OrbitBall ball = orbit_ball(ray(1, 2, 3), 4);
  ASSERT_EQ(ball.entries.size(), ball_size(4));
  for (const auto& [w, r] : ball.entries) {
    const std::string text = w.is_identity() ? "" : to_string(w);
    EXPECT_EQ(to_string(r), oracle::primitive_text(oracle::mul(oracle::word_matrix(text), oracle::V3{1, 2, 3})))
        << text;
  }
}

TEST(Orbit, FreenessAtSix) {
  const VerificationReport r = verify_freeness(ray(1, 2, 3), 6, 2);
  EXPECT_TRUE(r.passed());
  // Every word of the radius-6 ball gives its own ray: 2*3^6 - 1 of them.
  EXPECT_EQ(r.metric("distinct_rays"), std::to_string(oracle::ball_by_brute_force(6).size()));
  EXPECT_EQ(r.metric("distinct_rays"), "1457");
  EXPECT_EQ(r.metric("d_cutoff_checked"), "12");
}

TEST(Orbit, SeedInDIsRejected) {
  EXPECT_THROW(verify_freeness(ray(0, 0, 1), 3), PreconditionError);
  EXPECT_THROW(verify_freeness(ray(2, 1, 2), 2), PreconditionError);
  EXPECT_THROW(sphere_pieces_finite(ray(1, 0, 0), 3), PreconditionError);
}

TEST(Orbit, DMembershipCutoff) {
  const FixedWitness pole = d_membership_cutoff(ray(0, 0, -1), 3);
  EXPECT_TRUE(pole.fixed);
  EXPECT_EQ(to_string(*pole.witness), "a");
  const FixedWitness axis = d_membership_cutoff(ray(2, 1, 2), 3);
  EXPECT_TRUE(axis.fixed);
  EXPECT_EQ(to_string(*axis.witness), "ab");
  EXPECT_FALSE(d_membership_cutoff(ray(1, 2, 3), 8, 2).fixed);
  EXPECT_THROW(d_membership_cutoff(ray(1, 2, 3), 0), PreconditionError);
}

TEST(Orbit, RelationCutoff) {
  const RationalRay x = ray(1, 2, 3);
  const RationalRay y = apply(parse_word("aB").letters(), x);
  const OrbitRelation rel = orbit_relation_cutoff(x, y, 3);
  EXPECT_EQ(rel.kind, OrbitRelationKind::equal);
  EXPECT_EQ(to_string(*rel.witness), "aB");
  EXPECT_EQ(orbit_relation_cutoff(x, ray(1, 1, 1), 3).kind, OrbitRelationKind::disjoint_up_to_n);
}

TEST(SpherePieces, CountsMatchWordPieces) {
  const std::size_t n = 5;
  std::map<char, std::uint64_t> words;  // 'A' = A1, 'a' = A2, 'B' = B1, 'b' = B2
  for (const std::string& w : oracle::ball_by_brute_force(n)) {
    const bool power = w.find_first_not_of('a') == std::string::npos;
    if (w.empty() || w[0] == 'A' || power) ++words['A'];
    else if (w[0] == 'a') ++words['a'];
    else ++words[w[0] == 'B' ? 'B' : 'b'];
  }
  const SphereStage stage = sphere_pieces_finite(ray(1, 2, 3), n);
  EXPECT_TRUE(stage.report.passed());
  EXPECT_EQ(stage.pieces.a1x.size(), words['A']);
  EXPECT_EQ(stage.pieces.a2x.size(), words['a']);
  EXPECT_EQ(stage.pieces.b1x.size(), words['B']);
  EXPECT_EQ(stage.pieces.b2x.size(), words['b']);
  EXPECT_EQ(stage.report.metric("stage_rays"), std::to_string(ball_size(4)));
  EXPECT_EQ(stage.report.metric("piece_overlaps"), "0");
}

TEST(SpherePieces, StageSixCoversStageFive) {
  const SphereStage stage = sphere_pieces_finite(ray(1, 2, 3), 6, 2);
  EXPECT_TRUE(stage.report.passed());
  EXPECT_EQ(stage.report.metric("stage_rays"), "485");
  EXPECT_EQ(stage.report.metric("covered_by_a_side"), "485");
  EXPECT_EQ(stage.report.metric("covered_by_b_side"), "485");
  EXPECT_EQ(stage.report.metric("total_rays"), "1457");
}

TEST(Orbit, JsonDump) {
  const auto j = to_json(orbit_ball(ray(1, 2, 3), 1));
  ASSERT_EQ(j.size(), 5u);
  EXPECT_EQ(j[0]["word"], "e");
  EXPECT_EQ(j[0]["ray"][2], "3");
}
