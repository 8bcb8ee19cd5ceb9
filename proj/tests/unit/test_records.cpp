#include <gtest/gtest.h>

#include <sstream>

#include "fixtures.hpp"
#include "fresco/error.hpp"
#include "fresco/record_io.hpp"
#include "fresco/synth.hpp"

using namespace fresco;

namespace {

Errc code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return Errc::IoFailure;
}

bool has_violation(const std::vector<Violation>& vs, ViolationKind kind, const std::string& field_prefix) {
  for (const Violation& v : vs)
    if (v.kind == kind && v.field.rfind(field_prefix, 0) == 0) return true;
  return false;
}

}  // namespace

TEST(RecordIo, RoundTripIsLossless) {
  SynthOptions o;
  o.n = 12;
  o.seed = 3;
  const auto records = synthesize(o).records;
  std::stringstream ss;
  write_archive(ss, records);
  const auto back = read_archive(ss);
  ASSERT_EQ(back.size(), records.size());
  for (std::size_t i = 0; i < records.size(); ++i) {
    EXPECT_EQ(back[i], records[i]) << records[i].image_id;
    EXPECT_EQ(serialize_record(back[i]), serialize_record(records[i]));
  }
}

TEST(RecordIo, SampleFixtureParses) {
  const auto records = read_archive_file(test::source_path("samples/pair_a.jsonl"));
  ASSERT_EQ(records.size(), 2u);
  EXPECT_EQ(records[0].image_id, "img_00000");
  EXPECT_TRUE(validate_archive(records).empty());
}

TEST(RecordIo, KeepsUnknownFields) {
  ImageRecord r = test::blank_record("x");
  r.extras["source"] = "museum";
  const ImageRecord back = parse_record(serialize_record(r));
  EXPECT_EQ(back.extras["source"], "museum");
}

TEST(RecordIo, ErrorKinds) {
  EXPECT_EQ(code_of([] { parse_record("{not json"); }), Errc::MalformedRecord);
  EXPECT_EQ(code_of([] { parse_record("[1,2]"); }), Errc::SchemaViolation);
  EXPECT_EQ(code_of([] { parse_record(R"({"width": 10})"); }), Errc::SchemaViolation);

  auto j = record_to_json(test::blank_record("x"));
  j["width"] = "wide";
  EXPECT_EQ(code_of([&] { parse_record(j.dump()); }), Errc::SchemaViolation);

  j = record_to_json(test::blank_record("x"));
  j["global"]["rgb_histograms"][0][0] = 0.9;
  EXPECT_EQ(code_of([&] { parse_record(j.dump()); }), Errc::InvariantViolation);
}

TEST(RecordIo, LineNumbersInErrors) {
  std::stringstream ss;
  ss << serialize_record(test::blank_record("a")) << "\n\n{broken\n";
  try {
    read_archive(ss);
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos) << e.what();
  }
}

TEST(RecordIo, MissingFileIsIoFailure) {
  EXPECT_EQ(code_of([] { read_archive_file("/nonexistent/x.jsonl"); }), Errc::IoFailure);
}

TEST(Validation, BlankRecordIsClean) { EXPECT_TRUE(check_record(test::blank_record("a")).empty()); }

TEST(Validation, RangesAndInvariants) {
  ImageRecord r = test::blank_record("a", 100, 100);
  r.global.brightness = 1.5;
  r.coverage = {{"sky", 0.7}, {"sea", 0.6}};
  r.tags = {{"dog", 0.5}, {"dog", 0.4}};
  r.instances = {test::object("o0", "dog", {90, 90, 20, 20}), test::object("o0", "", {0, 0, 0, 5})};
  const auto vs = check_record(r);
  EXPECT_TRUE(has_violation(vs, ViolationKind::RangeViolation, "brightness"));
  EXPECT_TRUE(has_violation(vs, ViolationKind::InvariantViolation, "coverage"));
  EXPECT_TRUE(has_violation(vs, ViolationKind::InvariantViolation, "tags"));
  EXPECT_TRUE(has_violation(vs, ViolationKind::RangeViolation, "instances[o0].bbox"));
  EXPECT_TRUE(has_violation(vs, ViolationKind::InvariantViolation, "instances[o0].category"));
  EXPECT_TRUE(has_violation(vs, ViolationKind::InvariantViolation, "instances"));
}

TEST(Validation, FaceConfidenceShapes) {
  ImageRecord r = test::blank_record("a");
  r.instances = {test::face("f0", {0, 0, 10, 10})};
  auto f = r.instances[0].face();
  f.emotion_conf = {0.5, 0.5};
  r.instances[0].attributes = f;
  EXPECT_FALSE(check_record(r).empty());
}

TEST(Validation, ArchiveLevelChecks) {
  std::vector<ImageRecord> rs{test::blank_record("a"), test::blank_record("a"), test::blank_record("b", 10, 10, 8)};
  rs[0].caption = CaptionEntry{"x", {1, 0}};
  rs[2].caption = CaptionEntry{"y", {1, 0, 0}};
  const auto vs = validate_archive(rs);
  EXPECT_TRUE(has_violation(vs, ViolationKind::DuplicateId, "image_id"));
  EXPECT_TRUE(has_violation(vs, ViolationKind::MixedHistogramBins, "rgb_histograms"));
  EXPECT_TRUE(has_violation(vs, ViolationKind::DimensionMismatch, "caption.embedding"));
}

TEST(Synth, ValidForManySeeds) {
  for (std::uint64_t seed = 1; seed <= 12; ++seed) {
    SynthOptions o;
    o.n = 30;
    o.seed = seed;
    o.duplicate_rate = 0.1;
    const SynthOutput out = synthesize(o);
    ASSERT_EQ(out.records.size(), 30u);
    const auto vs = validate_archive(out.records);
    EXPECT_TRUE(vs.empty()) << "seed " << seed << ": " << (vs.empty() ? "" : vs[0].message);
  }
}

TEST(Synth, DeterministicAndSeedSensitive) {
  SynthOptions o;
  o.n = 10;
  const SynthOutput a = synthesize(o), b = synthesize(o);
  EXPECT_EQ(a.records, b.records);
  o.seed = 8;
  EXPECT_NE(synthesize(o).records, a.records);
}

TEST(Synth, TruthMatchesRecords) {
  SynthOptions o;
  o.n = 60;
  o.duplicate_rate = 0.1;
  const SynthOutput out = synthesize(o);
  ASSERT_EQ(out.truth.people.size(), out.records.size());
  std::size_t emotions = 0;
  for (std::size_t c : out.truth.emotion_counts) emotions += c;
  std::size_t faces = 0;
  for (std::size_t i = 0; i < out.records.size(); ++i) {
    std::size_t f = 0;
    for (const auto& inst : out.records[i].instances) f += inst.is_face();
    EXPECT_EQ(static_cast<int>(f), out.truth.faces[i]);
    faces += f;
  }
  EXPECT_EQ(emotions, faces);
  for (const auto& [orig, copy] : out.truth.duplicates) EXPECT_NE(orig, copy);
}

TEST(Synth, FixedCounts) {
  SynthOptions o;
  o.n = 5;
  o.fixed_faces = 2;
  o.fixed_objects = 3;
  o.duplicate_rate = 0.0;
  for (const ImageRecord& r : synthesize(o).records) {
    int faces = 0, objects = 0;
    for (const auto& inst : r.instances) (inst.is_face() ? faces : objects)++;
    EXPECT_EQ(faces, 2);
    EXPECT_EQ(objects, 3);
  }
}
