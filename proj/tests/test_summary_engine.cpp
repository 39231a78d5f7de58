#include "doctest.h"

#include <cmath>
#include <numeric>
#include <random>

#include "extraction_oracle.hpp"
#include "pal/summary_engine.hpp"
#include "pal/text.hpp"

using namespace pal;

namespace {

double norm(const EmbeddingVector& v) {
  return std::sqrt(std::inner_product(v.values.begin(), v.values.end(), v.values.begin(), 0.0));
}

Transcript transcript_of(const std::vector<std::string>& lines) {
  Transcript t;
  for (std::size_t i = 0; i < lines.size(); ++i) t.segments.push_back({10.0 * i, lines[i], i});
  return t;
}

QuestionRecord record(std::string q, double t) {
  QuestionRecord r;
  r.q = std::move(q);
  r.a = {{"a", "b"}, 0};
  r.t = t;
  return r;
}

const std::vector<std::string> kLecture = {
    "Entropy measures how spread out energy is.",
    "Entropy always grows in an isolated system.",
    "Temperature is defined as average kinetic energy.",
    "For example, a cooking pot on the stove heats water.",
    "Enthalpy is the heat content at constant pressure.",
    "Football players sweat because muscles release heat.",
};

} // namespace

TEST_CASE("segmentation examples") {
  auto texts = [](std::string_view s) {
    std::vector<std::string> out;
    for (const auto& x : text::segment_sentences(s)) out.push_back(x.text);
    return out;
  };
  CHECK(texts("A is B. C is D.") == std::vector<std::string>{"A is B.", "C is D."});
  CHECK(texts("Pi is 3.14 approximately.").size() == 1);
  CHECK(texts("").empty());
}

TEST_CASE("embeddings are unit length or zero") {
  CHECK(norm(embed("Entropy measures disorder.")) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(cosine(embed(kLecture[1]), embed(kLecture[1])) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(embed("the of and").is_zero());
  CHECK(embed("").is_zero());
  CHECK(stopwords().size() == 50);
}

TEST_CASE("a single token lands in its frozen bucket") {
  // FNV-1a 64 of "entropy": bucket 50, top bit set.
  const auto v = embed("Entropy!");
  for (std::size_t i = 0; i < v.values.size(); ++i) CHECK(v.values[i] == (i == 50 ? -1.0 : 0.0));
}

TEST_CASE("token-disjoint sentences without collisions are orthogonal") {
  // Buckets: photosynthesis 111, chlorophyll 135, volcano 61, magma 46.
  const std::vector<std::uint64_t> expected = {111, 135, 61, 46};
  std::vector<std::uint64_t> buckets;
  for (auto w : {"photosynthesis", "chlorophyll", "volcano", "magma"}) buckets.push_back(text::fnv1a64(w) % 256);
  CHECK(buckets == expected);
  CHECK(cosine(embed("photosynthesis chlorophyll"), embed("volcano magma")) == 0.0);
}

TEST_CASE("cosine is symmetric and bounded") {
  std::mt19937_64 rng(4);
  for (int i = 0; i < 200; ++i) {
    const auto a = embed(testing::random_topic(rng) + " " + testing::random_topic(rng));
    const auto b = embed(testing::random_topic(rng));
    CHECK(cosine(a, b) == cosine(b, a));
    CHECK(cosine(a, b) <= 1.0 + 1e-12);
    CHECK(cosine(a, b) >= -1.0 - 1e-12);
  }
}

TEST_CASE("extraction examples") {
  const auto t = transcript_of(kLecture);
  SUBCASE("exact sentence, k = 1") {
    const auto spans = extract_relevant(kLecture[4], t, 1);
    REQUIRE(spans.size() == 1);
    CHECK(spans[0].first == 3);
    CHECK(spans[0].last == 5);
    CHECK(spans[0].text.find(kLecture[4]) != std::string::npos);
  }
  SUBCASE("adjacent hits merge") {
    const auto spans = extract_relevant("entropy", t, 2);
    REQUIRE(spans.size() == 1);
    CHECK(spans[0].first == 0);
    CHECK(spans[0].last == 2);
    CHECK(spans[0].t == 0.0);
  }
  SUBCASE("empty inputs") {
    CHECK(extract_relevant("entropy", Transcript{}, 3).empty());
    CHECK(extract_relevant("the of", t, 3).empty());
  }
}

TEST_CASE("extraction agrees with the brute-force oracle") {
  std::mt19937_64 rng(17);
  for (int round = 0; round < 30; ++round) {
    const auto t = testing::random_transcript(rng, 60);
    const auto topic = testing::random_topic(rng);
    const std::size_t k = 1 + rng() % 6;
    CAPTURE(round);
    CHECK(extract_relevant(topic, t, k) == testing::oracle_extract(topic, t, k));
  }
}

TEST_CASE("classification examples") {
  const auto c = classify_concepts({{"a", 4, 4}, {"b", 0, 0}, {"c", 2, 1}, {"d", 3, 1}, {"e", 1, 1}});
  CHECK(c.mastered == std::vector<std::string>{"a"});
  CHECK(c.discovery == std::vector<std::string>{"b", "d"});
  CHECK(c.neutral == std::vector<std::string>{"c", "e"});
}

TEST_CASE("classification partitions every concept") {
  std::mt19937_64 rng(8);
  std::vector<ConceptStats> stats;
  for (int i = 0; i < 300; ++i) {
    const std::size_t asked = rng() % 6;
    stats.push_back({std::to_string(i), asked, asked == 0 ? 0 : rng() % (asked + 1)});
  }
  const auto c = classify_concepts(stats);
  CHECK(c.mastered.size() + c.discovery.size() + c.neutral.size() == stats.size());
  for (const auto& m : c.mastered) {
    CHECK(std::find(c.discovery.begin(), c.discovery.end(), m) == c.discovery.end());
  }
}

TEST_CASE("summary of a perfect run lists only unasked concepts under discovery") {
  Bank bank;
  bank.questions = {record("What is entropy?", 1), record("What is entropy?", 2),
                    record("What is temperature?", 3), record("What is temperature?", 4),
                    record("What is enthalpy?", 5)};
  const std::vector<AnsweredQuestion> answers = {{0, true}, {1, true}, {2, true}, {3, true}};
  const auto report = compose_summary(bank, answers, transcript_of(kLecture), {"ana", {}});
  REQUIRE(report.mastered.size() == 2);
  CHECK(report.mastered[0].topic == "entropy");
  REQUIRE(report.discovery.size() == 1);
  CHECK(report.discovery[0].topic == "enthalpy");
  CHECK_FALSE(report.discovery[0].excerpts.empty());
  CHECK(report.tailored_examples.empty());
  CHECK(report.rendered.find("Territory Mastered") != std::string::npos);
  CHECK(report.rendered.find("Discovery Zone") != std::string::npos);
  CHECK(report.rendered.find(kExamplesHeader) == std::string::npos);
}

TEST_CASE("interests pick tailored examples deterministically") {
  Bank bank;
  bank.questions = {record("What is entropy?", 1)};
  const LearnerProfile profile{"ana", {"cooking", "football"}};
  const auto a = compose_summary(bank, {{0, false}}, transcript_of(kLecture), profile);
  const auto b = compose_summary(bank, {{0, false}}, transcript_of(kLecture), profile);
  CHECK(a.rendered == b.rendered);
  REQUIRE(a.tailored_examples.size() >= 2);
  CHECK(a.tailored_examples[0] == kLecture[3]);
  CHECK(a.tailored_examples[1] == kLecture[5]);
  CHECK(a.rendered.find(kExamplesHeader) != std::string::npos);
}
