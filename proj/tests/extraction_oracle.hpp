#pragma once

// Brute-force reference for extract_relevant plus a random transcript
// generator, shared by the unit and acceptance suites.

#include <algorithm>
#include <random>
#include <string>
#include <vector>

#include "pal/summary_engine.hpp"

namespace pal::testing {

inline std::vector<SentenceSpan> oracle_extract(const std::string& topic, const Transcript& transcript,
                                                std::size_t k) {
  const auto sentences = transcript_sentences(transcript);
  const EmbeddingVector q = embed(topic);
  if (q.is_zero() || sentences.empty()) return {};

  struct Scored {
    double score;
    std::size_t index;
  };
  std::vector<Scored> all;
  for (std::size_t i = 0; i < sentences.size(); ++i) {
    const EmbeddingVector v = embed(sentences[i].text);
    if (v.is_zero()) continue;
    double dot = 0.0;
    for (std::size_t d = 0; d < v.values.size(); ++d) dot += q.values[d] * v.values[d];
    all.push_back({dot, i});
  }
  std::sort(all.begin(), all.end(), [](const Scored& a, const Scored& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.index < b.index;
  });
  if (all.size() > k) all.resize(k);

  // Mark each hit with its neighbours, then read off runs that were joined
  // by overlapping windows.
  const std::size_t n = sentences.size();
  std::vector<std::pair<std::size_t, std::size_t>> windows;
  for (const auto& s : all) windows.push_back({s.index == 0 ? 0 : s.index - 1, std::min(n - 1, s.index + 1)});
  std::sort(windows.begin(), windows.end());
  std::vector<std::pair<std::size_t, std::size_t>> merged;
  for (const auto& w : windows) {
    bool joined = false;
    for (auto& m : merged) {
      if (w.first <= m.second && m.first <= w.second) {
        m.first = std::min(m.first, w.first);
        m.second = std::max(m.second, w.second);
        joined = true;
      }
    }
    if (!joined) merged.push_back(w);
  }

  std::vector<SentenceSpan> out;
  for (const auto& [first, last] : merged) {
    SentenceSpan span{first, last, sentences[first].t, {}};
    for (std::size_t i = first; i <= last; ++i) {
      if (i > first) span.text += " ";
      span.text += sentences[i].text;
    }
    out.push_back(span);
  }
  return out;
}

// Sentences drawn from a small vocabulary so scores tie often.
inline Transcript random_transcript(std::mt19937_64& rng, std::size_t max_sentences) {
  static const std::vector<std::string> words = {
      "energy", "entropy", "heat",  "system", "work",  "gas",    "pressure", "volume",
      "state",  "the",     "of",    "and",    "cycle", "engine", "is",       "temperature"};
  Transcript t;
  t.source_id = "random";
  const std::size_t n = 1 + rng() % max_sentences;
  double time = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t len = 3 + rng() % 6;
    std::string s;
    for (std::size_t w = 0; w < len; ++w) {
      std::string word = words[rng() % words.size()];
      if (w == 0) word[0] = static_cast<char>(word[0] - 'a' + 'A');
      if (w > 0) s += " ";
      s += word;
    }
    s += ".";
    t.segments.push_back({time, s, i});
    time += 1.0 + static_cast<double>(rng() % 5);
  }
  return t;
}

inline std::string random_topic(std::mt19937_64& rng) {
  static const std::vector<std::string> topics = {"entropy", "heat engine", "gas pressure volume",
                                                  "the of",  "work",        "temperature of the system"};
  return topics[rng() % topics.size()];
}

} // namespace pal::testing
