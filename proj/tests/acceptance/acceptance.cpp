// Copyright 2026 The alignscope Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
// exits non-zero if any criterion fails.
//
//   alignscope_acceptance <path to alignscope CLI> <scratch directory>
//
// Set ALIGNSCOPE_REFERENCE_CORPUS to a directory holding corpus.jsonl and
// annotations.json of the LoveFraud02 collection to add the corpus
// filtering check to criterion 4.

#include <fcntl.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "alignscope/alignment.hpp"
#include "alignscope/corpus_io.hpp"
#include "alignscope/dialogue.hpp"
#include "alignscope/error.hpp"
#include "alignscope/hints.hpp"
#include "alignscope/providers.hpp"
#include "alignscope/resources.hpp"
#include "alignscope/service.hpp"
#include "alignscope/stats.hpp"
#include "alignscope/study.hpp"
#include "alignscope/synth.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace alignscope;

namespace {

fs::path g_cli;
fs::path g_work;

// Collects failed sub-checks of one criterion.
struct Check {
  std::vector<std::string> failures;
  std::string detail;

  void expect(bool ok, const std::string& what) {
    if (!ok) failures.push_back(what);
  }
  void near(double actual, double expected, double tol, const std::string& what) {
    if (!(std::fabs(actual - expected) <= tol)) {
      char buf[160];
      std::snprintf(buf, sizeof buf, " (got %.17g, want %.17g)", actual, expected);
      failures.push_back(what + buf);
    }
  }
};

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

// Runs the CLI with stdout and stderr sent to `log`; returns the exit code.
int run_cli(const std::vector<std::string>& args, const fs::path& log) {
  fs::create_directories(log.parent_path());
  std::vector<std::string> argv_storage{g_cli.string()};
  argv_storage.insert(argv_storage.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (std::string& a : argv_storage) argv.push_back(a.data());
  argv.push_back(nullptr);
  const pid_t pid = fork();
  if (pid == 0) {
    const int fd = open(log.c_str(), O_WRONLY | O_CREAT | O_TRUNC, 0644);
    if (fd >= 0) {
      dup2(fd, 1);
      dup2(fd, 2);
    }
    execv(argv[0], argv.data());
    _exit(127);
  }
  int status = 0;
  waitpid(pid, &status, 0);
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

void require_cli(const std::vector<std::string>& args, const fs::path& log) {
  const int code = run_cli(args, log);
  if (code != 0) {
    throw std::runtime_error("CLI " + args.front() + " exited " + std::to_string(code) + ": " +
                             slurp(log));
  }
}

std::map<std::string, std::string> snapshot(const fs::path& dir) {
  std::map<std::string, std::string> files;
  if (fs::is_regular_file(dir)) {
    files[dir.filename().string()] = slurp(dir);
    return files;
  }
  for (const auto& entry : fs::recursive_directory_iterator(dir)) {
    if (entry.is_regular_file()) {
      files[fs::relative(entry.path(), dir).string()] = slurp(entry.path());
    }
  }
  return files;
}

// ---------------------------------------------------------------------------
// Independent reference computations

double ref_jaccard(const std::set<std::string>& a, const std::set<std::string>& b) {
  std::size_t inter = 0;
  for (const std::string& x : a) inter += b.count(x);
  const std::size_t uni = a.size() + b.size() - inter;
  return uni == 0 ? 0.0 : static_cast<double>(inter) / static_cast<double>(uni);
}

double ref_cosine(const std::vector<double>& x, const std::vector<double>& y) {
  double dot = 0, nx = 0, ny = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    dot += x[i] * y[i];
    nx += x[i] * x[i];
    ny += y[i] * y[i];
  }
  if (nx == 0.0 || ny == 0.0) return 0.0;
  return dot / std::sqrt(nx * ny);
}

std::vector<double> counted_ranks(const std::vector<double>& v) {
  std::vector<double> r(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    double less = 0, equal = 0;
    for (double w : v) {
      less += w < v[i];
      equal += w == v[i];
    }
    r[i] = less + (equal + 1.0) / 2.0;
  }
  return r;
}

double ref_pearson(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  return sxy / std::sqrt(sxx * syy);
}

// Two-sided p from all 2^m sign assignments of the non-zero differences.
double enumerate_wilcoxon(const std::vector<double>& d) {
  std::vector<double> nonzero;
  for (double x : d) {
    if (x != 0.0) nonzero.push_back(x);
  }
  const std::size_t m = nonzero.size();
  if (m == 0) return 1.0;
  std::vector<double> abs(m);
  for (std::size_t i = 0; i < m; ++i) abs[i] = std::fabs(nonzero[i]);
  const std::vector<double> ranks = counted_ranks(abs);
  double observed = 0;
  for (std::size_t i = 0; i < m; ++i) {
    if (nonzero[i] > 0) observed += ranks[i];
  }
  const double center = m * (m + 1) / 4.0;
  const double dev = std::fabs(observed - center);
  std::uint64_t extreme = 0;
  for (std::uint64_t mask = 0; mask < (1ULL << m); ++mask) {
    double w = 0;
    for (std::size_t i = 0; i < m; ++i) {
      if (mask >> i & 1) w += ranks[i];
    }
    extreme += std::fabs(w - center) >= dev - 1e-9;
  }
  return std::min(1.0, static_cast<double>(extreme) / std::ldexp(1.0, static_cast<int>(m)));
}

// Embedding provider serving a fixed table, so the oracle knows every vector.
class TableEmbedding final : public EmbeddingProvider {
 public:
  TableEmbedding(std::shared_ptr<const std::map<std::string, std::vector<double>>> table,
                 std::size_t dim)
      : table_(std::move(table)), dim_(dim) {}
  std::string id() const override { return "table"; }
  std::string fingerprint() const override { return "table"; }
  std::size_t dim() const override { return dim_; }
  UtteranceEmbedding embed(std::string_view text) const override {
    return {table_->at(std::string(text)), "table"};
  }

 private:
  std::shared_ptr<const std::map<std::string, std::vector<double>>> table_;
  std::size_t dim_;
};

Dialogue two_party(const std::vector<std::pair<std::string, std::string>>& rounds) {
  Dialogue d;
  d.dialogue_id = "oracle";
  d.role_a_speaker_id = "A";
  d.role_b_speaker_id = "B";
  for (std::size_t i = 0; i < rounds.size(); ++i) {
    d.rounds.push_back(Round{i + 1, Turn{"A", rounds[i].first, {2 * i}},
                             Turn{"B", rounds[i].second, {2 * i + 1}}});
  }
  return d;
}

// ---------------------------------------------------------------------------
// 1. Alignment oracle

Check alignment_oracle() {
  Check c;
  const auto start = std::chrono::steady_clock::now();
  const std::vector<std::string> vocab = {
      "the", "dog", "cat", "chased", "money", "send", "bank", "a", "quickly", "today",
      "gift", "card", "walking", "you", "will", "in", "love", "trust", "me", "42"};
  std::mt19937_64 rng(20240601);
  std::normal_distribution<double> normal;
  std::size_t rounds_checked = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n_rounds = 1 + rng() % 20;
    const std::size_t dim = 2 + rng() % 255;
    double alpha = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
    if (trial % 10 == 0) alpha = 0.0;
    if (trial % 10 == 1) alpha = 1.0;

    auto table = std::make_shared<std::map<std::string, std::vector<double>>>();
    auto utterance = [&] {
      if (rng() % 12 == 0) return std::string();
      std::string text;
      const std::size_t words = 1 + rng() % 7;
      for (std::size_t w = 0; w < words; ++w) {
        if (w) text += ' ';
        text += vocab[rng() % vocab.size()];
      }
      return text;
    };
    std::vector<std::pair<std::string, std::string>> rounds;
    for (std::size_t r = 0; r < n_rounds; ++r) rounds.emplace_back(utterance(), utterance());
    for (const auto& [a, b] : rounds) {
      for (const std::string& text : {a, b}) {
        if (table->count(text)) continue;
        std::vector<double> v(dim, 0.0);
        if (!text.empty()) {
          double norm = 0;
          for (double& x : v) {
            x = normal(rng);
            norm += x * x;
          }
          for (double& x : v) x /= std::sqrt(norm);
        }
        (*table)[text] = std::move(v);
      }
    }

    ProviderRegistry registry = ProviderRegistry::with_builtins();
    registry.register_embedding("table", [table, dim](const ProviderConfig&) {
      return std::make_shared<TableEmbedding>(table, dim);
    });
    ProviderConfig config;
    config.embed_provider_id = "table";
    config.embed_dim = dim;
    const FeatureProviders providers = registry.build(config);
    const AlignmentEngine engine(providers, alpha);
    const Trajectory got = engine.score_dialogue(two_party(rounds));
    if (got.scores.size() != n_rounds) {
      c.expect(false, "trajectory length");
      continue;
    }

    for (std::size_t t = 0; t < n_rounds; ++t) {
      const TurnFeatures fa = providers.analyze(rounds[t].first);
      const TurnFeatures fb = providers.analyze(rounds[t].second);
      // Replay both discourse states from scratch in closed form.
      std::vector<double> sa(dim, 0.0), sb(dim, 0.0);
      for (std::size_t k = 0; k <= t; ++k) {
        const double weight = (1.0 - alpha) * std::pow(alpha, static_cast<double>(t - k));
        const auto& ea = table->at(rounds[k].first);
        const auto& eb = table->at(rounds[k].second);
        for (std::size_t i = 0; i < dim; ++i) {
          sa[i] += weight * ea[i];
          sb[i] += weight * eb[i];
        }
      }
      const std::string where =
          "trial " + std::to_string(trial) + " round " + std::to_string(t + 1);
      const AlignmentVector& v = got.scores[t];
      c.near(v.lex, ref_jaccard(fa.words.tokens, fb.words.tokens), 1e-9, where + " lex");
      c.near(v.syn, ref_jaccard(fa.labels.labels, fb.labels.labels), 1e-9, where + " syn");
      c.near(v.sem, ref_cosine(table->at(rounds[t].first), table->at(rounds[t].second)), 1e-9,
             where + " sem");
      c.near(v.sit, ref_cosine(sa, sb), 1e-9, where + " sit");
      c.expect(v.round == t + 1, where + " index");
      ++rounds_checked;
    }
  }
  const double elapsed = seconds_since(start);
  c.expect(elapsed < 10.0, "runtime " + std::to_string(elapsed) + " s");
  char buf[128];
  std::snprintf(buf, sizeof buf, "200 dialogues, %zu rounds, %.2f s", rounds_checked, elapsed);
  c.detail = buf;
  return c;
}

// ---------------------------------------------------------------------------
// 2. Degenerate conventions

UtteranceEmbedding emb(std::vector<double> v) { return {std::move(v), "fixed"}; }

Check degenerate_conventions() {
  Check c;
  auto words = [](std::set<std::string> s) { return ContentWordSet{std::move(s)}; };
  auto labels = [](std::set<std::string> s) { return DepLabelSet{std::move(s)}; };
  c.expect(lex_align(words({}), words({})) == 0.0, "empty lexical sets");
  c.expect(syn_align(labels({}), labels({})) == 0.0, "empty label sets");
  c.expect(lex_align(words({"a"}), words({})) == 0.0, "one empty set");
  c.expect(lex_align(words({"a", "b", "c"}), words({"a", "b", "c"})) == 1.0, "identical sets");
  c.expect(lex_align(words({"a"}), words({"b"})) == 0.0, "disjoint sets");
  c.expect(lex_align(words({"send", "money", "bank"}), words({"bank", "money", "today"})) == 0.5,
           "half overlap");
  c.expect(syn_align(labels({"det", "nsubj", "obj"}), labels({"det", "prep"})) == 0.25,
           "quarter overlap");

  c.expect(sem_align(emb({0, 0, 0}), emb({1, 0, 0})) == 0.0, "zero vector cosine");
  c.expect(sem_align(emb({0, 0}), emb({0, 0})) == 0.0, "two zero vectors");
  c.expect(sem_align(emb({1, 0}), emb({0, 1})) == 0.0, "orthogonal");
  c.near(sem_align(emb({0.6, 0.8}), emb({-0.6, -0.8})), -1.0, 1e-12, "antipodal");
  c.near(sem_align(emb({0.6, 0.8}), emb({0.6, 0.8})), 1.0, 1e-12, "self");

  DiscourseState zero(Speaker::kA, 2);
  DiscourseState s0 = update_state(update_state(zero, emb({3, 4}), 0.0), emb({1, 2}), 0.0);
  c.expect(std::vector<double>(s0.vector().begin(), s0.vector().end()) ==
               std::vector<double>{1, 2},
           "alpha 0 keeps only the latest embedding");
  DiscourseState s1 = update_state(update_state(zero, emb({3, 4}), 1.0), emb({1, 2}), 1.0);
  c.expect(std::vector<double>(s1.vector().begin(), s1.vector().end()) ==
               std::vector<double>{0, 0},
           "alpha 1 ignores input");
  DiscourseState h1 = update_state(zero, emb({1, 0}), 0.5);
  DiscourseState h2 = update_state(h1, emb({0, 1}), 0.5);
  c.expect(h1.vector()[0] == 0.5 && h1.vector()[1] == 0.0, "half-decay trace step 1");
  c.expect(h2.vector()[0] == 0.25 && h2.vector()[1] == 0.5, "half-decay trace step 2");
  c.expect(sit_align(zero, DiscourseState(Speaker::kB, 2)) == 0.0, "zero states");

  const Dialogue d = two_party({{"the dog chased the cat", "a cat chased the dog today"},
                                {"send money to the bank", "i love gift cards"},
                                {"", "trust me"}});
  const Trajectory frozen = AlignmentEngine(make_default_providers(), 1.0).score_dialogue(d);
  for (const AlignmentVector& v : frozen.scores) c.expect(v.sit == 0.0, "alpha 1 sit stays 0");
  const Trajectory memoryless = AlignmentEngine(make_default_providers(), 0.0).score_dialogue(d);
  for (const AlignmentVector& v : memoryless.scores) {
    c.near(v.sit, v.sem, 1e-12, "alpha 0 sit equals sem");
  }
  c.expect(memoryless.scores[2].sem == 0.0, "empty utterance embeds to zero");

  auto turns = [](const std::string& speakers) {
    std::vector<Turn> out;
    for (std::size_t i = 0; i < speakers.size(); ++i) {
      out.push_back(Turn{std::string(1, speakers[i]), std::to_string(i + 1), {i}});
    }
    return out;
  };
  c.expect(segment_rounds(turns("ABAB"), "A").size() == 2, "ABAB gives 2 rounds");
  const std::vector<Round> leading = segment_rounds(turns("BABAB"), "A");
  c.expect(leading.size() == 2 && leading[0].initiator.text == "2" &&
               leading[0].index == 1 && leading[1].index == 2,
           "leading B turn dropped");
  const std::vector<Round> odd = segment_rounds(turns("ABA"), "A");
  c.expect(odd.size() == 1 && odd[0].response.text == "2", "trailing A turn dropped");
  c.expect(segment_rounds(turns("B"), "A").empty(), "role A silent gives no rounds");
  c.expect(segment_rounds(turns(""), "A").empty(), "no turns gives no rounds");

  std::vector<Message> messages;
  const std::string speakers = "ABBAAAB";
  for (std::size_t i = 0; i < speakers.size(); ++i) {
    messages.push_back(Message{std::string(1, speakers[i]), i, std::to_string(i + 1), {}});
  }
  const std::vector<Turn> merged = merge_turns(messages);
  c.expect(merged.size() == 4 && merged[1].text == "2 3" && merged[2].text == "4 5 6" &&
               merged[3].text == "7",
           "merging consecutive messages");
  try {
    AlignmentEngine(make_default_providers()).score_dialogue(Dialogue{});
    c.expect(false, "scoring zero rounds must fail");
  } catch (const Error& e) {
    c.expect(e.kind() == ErrorKind::kData, "zero rounds is a data error");
  }
  c.detail = "set, vector, decay and segmentation conventions";
  return c;
}

// ---------------------------------------------------------------------------
// 3. Statistics oracle

// Upper chi-square tail in closed form for small even and odd df.
double chi_sf(double x, int df) {
  switch (df) {
    case 1: return std::erfc(std::sqrt(x / 2));
    case 2: return std::exp(-x / 2);
    case 3: return std::erfc(std::sqrt(x / 2)) + std::sqrt(2 * x / M_PI) * std::exp(-x / 2);
    case 4: return std::exp(-x / 2) * (1 + x / 2);
  }
  throw std::logic_error("df");
}

Check statistics_oracle() {
  Check c;
  const auto start = std::chrono::steady_clock::now();
  std::mt19937_64 rng(77);
  std::size_t wilcoxon_cases = 0;
  for (std::size_t m = 1; m <= 12; ++m) {
    for (int k = 0; k < 100; ++k) {
      std::vector<double> d(m);
      for (double& x : d) {
        // Integer magnitudes produce tied ranks; continuous ones do not.
        if (k % 2) {
          x = static_cast<double>(1 + rng() % 4);
        } else {
          x = std::uniform_real_distribution<double>(0.01, 1.0)(rng);
        }
        if (rng() % 2) x = -x;
      }
      const stats::WilcoxonResult got = stats::wilcoxon_signed_rank(d);
      c.expect(got.method == stats::WilcoxonMethod::kExact, "exact method for small m");
      c.near(got.p, enumerate_wilcoxon(d), 1e-12, "wilcoxon m=" + std::to_string(m));
      ++wilcoxon_cases;
    }
  }

  for (int k = 0; k < 200; ++k) {
    const std::size_t n = 3 + rng() % 30;
    std::vector<double> x(n), y(n);
    for (std::size_t i = 0; i < n; ++i) {
      x[i] = static_cast<double>(rng() % 6);
      y[i] = k % 2 ? std::uniform_real_distribution<double>(-1, 1)(rng)
                   : static_cast<double>(rng() % 5);
    }
    const stats::SpearmanResult got = stats::spearman_rho(x, y);
    const auto rx = counted_ranks(x), ry = counted_ranks(y);
    const bool constant = std::adjacent_find(x.begin(), x.end(), std::not_equal_to<>()) == x.end() ||
                          std::adjacent_find(y.begin(), y.end(), std::not_equal_to<>()) == y.end();
    if (constant) {
      c.expect(got.degenerate && !got.rho, "constant input is degenerate");
    } else {
      c.expect(got.rho.has_value(), "spearman defined");
      if (got.rho) c.near(*got.rho, ref_pearson(rx, ry), 1e-12, "spearman");
    }
  }

  const std::vector<std::vector<std::vector<double>>> matrices = {
      {{1, 2, 3}, {2, 3, 1}, {3, 1, 2}, {1, 3, 2}},
      {{0.81, 0.6, 0.7, 0.9}, {0.5, 0.55, 0.6, 0.8}, {0.7, 0.65, 0.9, 0.95}},
      {{1, 1, 2}, {3, 2, 2}, {1, 2, 3}, {5, 4, 4}, {2, 2, 2}},
  };
  for (std::size_t idx = 0; idx < matrices.size(); ++idx) {
    const auto& m = matrices[idx];
    const double n = static_cast<double>(m.size());
    const double k = static_cast<double>(m[0].size());
    std::vector<double> rank_sums(m[0].size(), 0.0);
    double sum_sq = 0.0;
    for (const auto& row : m) {
      const auto r = counted_ranks(row);
      for (std::size_t j = 0; j < r.size(); ++j) {
        rank_sums[j] += r[j];
        sum_sq += r[j] * r[j];
      }
    }
    // Tie-corrected statistic; without ties it reduces to
    // 12 / (n k (k+1)) * sum R_j^2 - 3 n (k+1).
    double num = 0.0;
    for (double rj : rank_sums) num += (rj - n * (k + 1) / 2) * (rj - n * (k + 1) / 2);
    const double q = (k - 1) * num / (sum_sq - n * k * (k + 1) * (k + 1) / 4);
    if (idx < 2) {
      double simple = 0.0;
      for (double rj : rank_sums) simple += rj * rj;
      simple = 12.0 / (n * k * (k + 1)) * simple - 3 * n * (k + 1);
      c.near(q, simple, 1e-12, "tie-free formulas agree");
    }
    const stats::FriedmanResult got = stats::friedman(m);
    const std::string name = "friedman matrix " + std::to_string(idx + 1);
    c.near(got.statistic, q, 1e-12, name + " statistic");
    c.near(got.p, chi_sf(q, static_cast<int>(k) - 1), 1e-12, name + " p");
  }
  // Matrix 1 by hand: rank sums 7, 9, 8 over n=4, k=3 give Q = 0.5.
  c.near(stats::friedman(matrices[0]).statistic, 0.5, 1e-12, "friedman hand value");

  const double elapsed = seconds_since(start);
  c.expect(elapsed < 30.0, "runtime " + std::to_string(elapsed) + " s");
  char buf[128];
  std::snprintf(buf, sizeof buf, "%zu wilcoxon, 200 spearman, 3 friedman cases, %.2f s",
                wilcoxon_cases, elapsed);
  c.detail = buf;
  return c;
}

// ---------------------------------------------------------------------------
// 4. Planted decline trend reproduction through the CLI

Check planted_trend() {
  Check c;
  const fs::path dir = g_work / "trend";
  fs::remove_all(dir);
  require_cli({"synth", "planted_decline", "--n", "47", "--rounds", "40", "--seed", "1", "--out",
               (dir / "synth").string()},
              dir / "synth.log");
  require_cli({"preprocess", "--corpus", (dir / "synth/corpus.jsonl").string(), "--annotations",
               (dir / "synth/annotations.json").string(), "--out", (dir / "pre").string()},
              dir / "pre.log");
  require_cli({"analyze", "--trajectories", (dir / "pre/trajectories").string(), "--out",
               (dir / "analysis").string()},
              dir / "analyze.log");
  const json manifest = json::parse(slurp(dir / "pre/manifest.json"));
  c.expect(manifest["counts"]["included"] == 47, "all 47 planted dialogues included");
  const json analysis = json::parse(slurp(dir / "analysis/analysis.json"));
  std::map<std::string, json> trends;
  for (const json& t : analysis["trends"]) trends[t["score"]] = t;
  std::string detail;
  for (const char* score : {"sem", "sit"}) {
    const json& t = trends.at(score);
    c.expect(t["p"].get<double>() < 0.001, std::string(score) + " p < 0.001");
    c.expect(t["median_rho"].is_number() && t["median_rho"].get<double>() < 0,
             std::string(score) + " median rho negative");
    char buf[96];
    std::snprintf(buf, sizeof buf, "%s p=%.3g rho=%.3f; ", score, t["p"].get<double>(),
                  t["median_rho"].is_number() ? t["median_rho"].get<double>() : NAN);
    detail += buf;
  }
  for (const char* score : {"lex", "syn"}) {
    const json& t = trends.at(score);
    c.expect(t["p"].get<double>() > 0.05, std::string(score) + " p > 0.05");
    char buf[64];
    std::snprintf(buf, sizeof buf, "%s p=%.3g; ", score, t["p"].get<double>());
    detail += buf;
  }

  if (const char* env = std::getenv("ALIGNSCOPE_REFERENCE_CORPUS")) {
    const fs::path ref(env);
    require_cli({"preprocess", "--corpus", (ref / "corpus.jsonl").string(), "--annotations",
                 (ref / "annotations.json").string(), "--out", (dir / "reference").string()},
                dir / "reference.log");
    const json m = json::parse(slurp(dir / "reference/manifest.json"));
    c.expect(m["counts"]["included"] == 47, "reference corpus keeps 47 dialogues");
    for (const json& entry : m["dialogues"]) {
      if (entry["status"] == "included") {
        c.expect(entry["window_messages"] == 80,
                 "reference dialogue " + entry["dialogue_id"].get<std::string>() +
                     " has 80 window messages");
      }
    }
    detail += "reference corpus checked";
  } else {
    detail += "reference corpus not supplied, filtering check skipped";
  }
  c.detail = detail;
  return c;
}

// ---------------------------------------------------------------------------
// 5. Pattern calibration

std::vector<Trajectory> score_synthetic(const SynthOptions& options) {
  const SynthCorpus corpus = generate_synthetic(options);
  const AlignmentEngine engine(make_default_providers());
  std::vector<Trajectory> out;
  for (const RawDialogue& raw : corpus.dialogues) {
    out.push_back(engine.score_dialogue(build_dialogue(raw)));
  }
  return out;
}

Check pattern_calibration() {
  Check c;
  SynthOptions planted;
  planted.n = 100;
  planted.rounds = 40;
  planted.seed = 11;
  const std::size_t decline_from = decline_start_round(planted);
  std::size_t fired_in_region = 0, fired_before = 0;
  for (const Trajectory& t : score_synthetic(planted)) {
    bool in_region = false, early = false;
    for (std::size_t r = kMinPatternRounds; r <= t.scores.size(); ++r) {
      const bool active = detect_pattern(window_scores(t.scores, r)).active;
      if (active && r >= decline_from) in_region = true;
      if (active && r < decline_from) early = true;
    }
    fired_in_region += in_region;
    fired_before += early;
  }

  SynthOptions flat = planted;
  flat.kind = SynthKind::kFlat;
  std::size_t windows = 0, flat_fired = 0;
  for (const Trajectory& t : score_synthetic(flat)) {
    for (std::size_t r = kMinPatternRounds; r <= t.scores.size(); ++r) {
      ++windows;
      flat_fired += detect_pattern(window_scores(t.scores, r)).active;
    }
  }
  c.expect(fired_in_region >= 95, "planted dialogues flagged in the decline region");
  c.expect(flat_fired * 20 < windows, "flat windows flagged below 5%");
  char buf[160];
  std::snprintf(buf, sizeof buf,
                "planted %zu/100 flagged in decline region (%zu before it); flat %zu/%zu windows",
                fired_in_region, fired_before, flat_fired, windows);
  c.detail = buf;
  return c;
}

// ---------------------------------------------------------------------------
// 6. Determinism of every CLI command

Check determinism() {
  Check c;
  const fs::path dir = g_work / "determinism";
  fs::remove_all(dir);
  const fs::path synth = dir / "synth", pre = dir / "pre", ana = dir / "analysis";
  const fs::path flat = dir / "flat", plan = dir / "plan.json";
  const fs::path events = dir / "events.jsonl", report = dir / "report.json",
                 report_csv = dir / "report.csv";

  struct Step {
    std::string name;
    std::vector<std::string> args;
    std::vector<fs::path> outputs;
  };
  const std::vector<Step> steps = {
      {"synth",
       {"synth", "planted_decline", "--n", "10", "--rounds", "40", "--seed", "5", "--out",
        synth.string()},
       {synth}},
      {"synth flat",
       {"synth", "flat", "--n", "5", "--rounds", "40", "--seed", "3", "--out", flat.string()},
       {flat}},
      {"preprocess",
       {"preprocess", "--corpus", (synth / "corpus.jsonl").string(), "--annotations",
        (synth / "annotations.json").string(), "--out", pre.string(), "--jobs", "3"},
       {pre}},
      {"analyze",
       {"analyze", "--trajectories", (pre / "trajectories").string(), "--out", ana.string()},
       {ana}},
      {"plan",
       {"plan", "--corpus", (flat / "corpus.jsonl").string(), "--participants", "4", "--seed",
        "9", "--out", plan.string()},
       {plan}},
      {"report",
       {"report", "--plan", plan.string(), "--events", events.string(), "--out", report.string(),
        "--csv", report_csv.string()},
       {report, report_csv}},
  };

  std::size_t compared = 0;
  for (const Step& step : steps) {
    if (step.name == "report") {
      // Every participant reviews the first two rounds of each dialogue.
      const study::StudyPlan p = study::plan_from_json(json::parse(slurp(plan)));
      std::ofstream out(events, std::ios::binary);
      for (const study::Assignment& a : p.assignments) {
        study::ReviewSession s(a.participant_id, a.dialogue_id, a.condition, 40);
        std::vector<study::StudyEvent> log = s.advance_round(std::nullopt, "t0");
        auto more = s.advance_round(3 + static_cast<int>(a.position), "t1");
        log.insert(log.end(), more.begin(), more.end());
        more = s.submit_verdict(a.position % 2 ? Label::kScam : Label::kNonScam, 7, "t2");
        log.insert(log.end(), more.begin(), more.end());
        for (const auto& e : log) out << study::to_json(e).dump() << '\n';
      }
    }
    std::vector<std::map<std::string, std::string>> runs;
    for (int attempt = 0; attempt < 2; ++attempt) {
      for (const fs::path& o : step.outputs) fs::remove_all(o);
      require_cli(step.args, dir / ("log_" + std::to_string(attempt) + ".txt"));
      std::map<std::string, std::string> files;
      for (const fs::path& o : step.outputs) {
        for (auto& [name, bytes] : snapshot(o)) files[o.filename().string() + "/" + name] = bytes;
      }
      runs.push_back(std::move(files));
    }
    c.expect(!runs[0].empty(), step.name + " wrote outputs");
    c.expect(runs[0] == runs[1], step.name + " outputs differ between runs");
    compared += runs[0].size();
  }

  // The thread count must not leak into the outputs.
  const std::map<std::string, std::string> threaded = snapshot(pre);
  fs::remove_all(pre);
  require_cli({"preprocess", "--corpus", (synth / "corpus.jsonl").string(), "--annotations",
               (synth / "annotations.json").string(), "--out", pre.string(), "--jobs", "1"},
              dir / "log_jobs.txt");
  c.expect(snapshot(pre) == threaded, "preprocess output depends on --jobs");
  c.detail = "synth, preprocess, analyze, plan, report: " + std::to_string(compared) +
             " files byte-identical across runs";
  return c;
}

// ---------------------------------------------------------------------------
// 7. Study metrics

study::StudyEvent ev(const std::string& p, const std::string& d, study::EventType type,
                     std::size_t round, std::optional<int> conf = {},
                     std::optional<Label> verdict = {}) {
  return study::StudyEvent{"t", p, d, type, round, conf, verdict};
}

// Reveals `confidences.size()` rounds with the given confidences, the last
// one sent with the verdict.
void script_session(std::vector<study::StudyEvent>& log, const std::string& p,
                    const std::string& d, const std::vector<int>& confidences, Label verdict) {
  study::ReviewSession s(p, d, HintCondition::kNone, 100);
  auto append = [&](std::vector<study::StudyEvent> events) {
    log.insert(log.end(), events.begin(), events.end());
  };
  append(s.advance_round(std::nullopt, "t"));
  for (std::size_t i = 0; i + 1 < confidences.size(); ++i) {
    append(s.advance_round(confidences[i], "t"));
  }
  append(s.submit_verdict(verdict, confidences.back(), "t"));
}

std::vector<study::PlannedDialogue> planned_dialogues(std::size_t scam, std::size_t benign,
                                                      std::size_t rounds) {
  std::vector<study::PlannedDialogue> out;
  for (std::size_t i = 0; i < scam + benign; ++i) {
    char id[16];
    std::snprintf(id, sizeof id, "d%02zu", i);
    out.push_back({id, i < scam ? Label::kScam : Label::kNonScam, rounds});
  }
  return out;
}

void check_metrics(Check& c, const study::Metrics& m, double p, double r, double f1,
                   const std::string& what) {
  c.expect(m.precision && m.recall && m.f1, what + " defined");
  if (m.precision) c.near(*m.precision, p, 1e-12, what + " precision");
  if (m.recall) c.near(*m.recall, r, 1e-12, what + " recall");
  if (m.f1) c.near(*m.f1, f1, 1e-12, what + " f1");
}

void scripted_confusion(Check& c) {
  // One participant, ten dialogues (d00-d04 scam), two per condition.
  const study::StudyPlan plan = study::generate_plan({"p1"}, planned_dialogues(5, 5, 3), 1);
  // Verdicts: d00 scam, d01 scam, d02 non_scam, d03 scam, d04 non_scam,
  //           d05 scam, d06 non_scam, d07 non_scam, d08 scam, d09 non_scam
  // Overall tp=3 fn=2 fp=2 tn=3.
  const std::map<std::string, Label> verdicts = {
      {"d00", Label::kScam},    {"d01", Label::kScam},    {"d02", Label::kNonScam},
      {"d03", Label::kScam},    {"d04", Label::kNonScam}, {"d05", Label::kScam},
      {"d06", Label::kNonScam}, {"d07", Label::kNonScam}, {"d08", Label::kScam},
      {"d09", Label::kNonScam}};
  std::vector<study::StudyEvent> log;
  for (const study::Assignment& a : plan.assignments) {
    study::ReviewSession s(a.participant_id, a.dialogue_id, a.condition, 3);
    auto events = s.advance_round(std::nullopt, "t");
    log.insert(log.end(), events.begin(), events.end());
    events = s.submit_verdict(verdicts.at(a.dialogue_id), 5, "t");
    log.insert(log.end(), events.begin(), events.end());
  }
  const study::StudyReport report =
      study::compute_report(study::replay_events(log, plan), plan);

  // Per condition the pair of dialogues is fixed by the Latin square:
  // condition c holds d_c (scam) and d_{c+5} (non_scam).
  //   none:        d00 scam/scam (tp), d05 non/scam (fp)   -> P 1/2 R 1 F1 2/3
  //   keyword:     d01 tp, d06 tn                           -> P 1 R 1 F1 1
  //   low_level:   d02 fn, d07 tn                           -> P undefined
  //   high_level:  d03 tp, d08 fp                           -> P 1/2 R 1 F1 2/3
  //   multi_level: d04 fn, d09 tn                           -> P undefined
  const auto& pc = report.per_condition;
  for (std::size_t k = 0; k < 5; ++k) {
    const auto& counts = pc[k].counts;
    c.expect(counts.tp + counts.fp + counts.fn + counts.tn == 2, "two sessions per condition");
  }
  check_metrics(c, pc[0], 0.5, 1.0, 2.0 / 3.0, "none");
  check_metrics(c, pc[1], 1.0, 1.0, 1.0, "keyword");
  c.expect(!pc[2].precision && pc[2].recall == 0.0, "low_level precision undefined");
  check_metrics(c, pc[3], 0.5, 1.0, 2.0 / 3.0, "high_level");
  c.expect(pc[4].counts.fn == 1 && pc[4].counts.tn == 1, "multi_level counts");

  // Pooled over conditions: tp=3 fp=2 fn=2 -> P = R = F1 = 3/5.
  study::ConfusionCounts pooled;
  for (const auto& m : pc) {
    pooled.tp += m.counts.tp;
    pooled.fp += m.counts.fp;
    pooled.fn += m.counts.fn;
    pooled.tn += m.counts.tn;
  }
  c.expect(pooled.tp == 3 && pooled.fp == 2 && pooled.fn == 2 && pooled.tn == 3, "pooled counts");
  check_metrics(c, study::compute_metrics(pooled), 0.6, 0.6, 0.6, "pooled");
}

void censored_confidence(Check& c) {
  // Three participants, five dialogues: each participant meets the "none"
  // condition exactly once.
  const study::StudyPlan plan =
      study::generate_plan({"p1", "p2", "p3"}, planned_dialogues(2, 3, 10), 4);
  std::map<std::string, std::string> none_dialogue;
  for (const study::Assignment& a : plan.assignments) {
    if (a.condition == HintCondition::kNone) none_dialogue[a.participant_id] = a.dialogue_id;
  }
  c.expect(none_dialogue.size() == 3, "each participant has a none-condition dialogue");
  std::vector<study::StudyEvent> log;
  // p1 decides at round 3, p2 at round 5, p3 at round 2.
  script_session(log, "p1", none_dialogue["p1"], {2, 4, 6}, Label::kScam);
  script_session(log, "p2", none_dialogue["p2"], {5, 7, 9, 3, 1}, Label::kNonScam);
  script_session(log, "p3", none_dialogue["p3"], {1, 10}, Label::kScam);
  const study::StudyReport report =
      study::compute_report(study::replay_events(log, plan), plan);
  const auto& traj = report.confidence[0];
  c.expect(traj.size() == 10, "ten rounds");
  // Hand values. Round 1: {2,5,1}; round 2: {4,7,10}; round 3: {6,9};
  // round 4: {3}; round 5: {1}; later rounds: nobody left.
  const double t2 = 4.302652729749464, t1 = 12.706204736174705;
  struct Expected {
    std::size_t n;
    double mean;
    double half;  // < 0 for none
  };
  const Expected expected[] = {
      {3, 8.0 / 3.0, t2 * std::sqrt(13.0 / 3.0) / std::sqrt(3.0)},
      {3, 7.0, t2 * 3.0 / std::sqrt(3.0)},
      {2, 7.5, t1 * std::sqrt(4.5) / std::sqrt(2.0)},
      {1, 3.0, -1},
      {1, 1.0, -1},
  };
  for (std::size_t r = 0; r < traj.size(); ++r) {
    const std::string where = "round " + std::to_string(r + 1);
    if (r < 5) {
      c.expect(traj[r].n == expected[r].n, where + " n");
      c.expect(traj[r].mean.has_value(), where + " mean present");
      if (traj[r].mean) c.near(*traj[r].mean, expected[r].mean, 1e-12, where + " mean");
      if (expected[r].half < 0) {
        c.expect(!traj[r].ci_half, where + " half-width absent");
      } else {
        c.expect(traj[r].ci_half.has_value(), where + " half-width present");
        if (traj[r].ci_half) c.near(*traj[r].ci_half, expected[r].half, 1e-9, where + " half");
      }
    } else {
      c.expect(traj[r].n == 0 && !traj[r].mean, where + " empty");
    }
  }
}

// Answers "scam" as soon as the cross-level flag fires, at the latest by
// round 15; otherwise "non_scam" after round 15.
void rule_agent(Check& c, std::string& detail) {
  std::vector<RawDialogue> corpus;
  SynthOptions o;
  o.n = 25;
  o.rounds = 20;
  o.seed = 21;
  o.decline_start = 0.3;
  for (SynthKind kind : {SynthKind::kPlantedDecline, SynthKind::kFlat}) {
    o.kind = kind;
    for (RawDialogue& d : generate_synthetic(o).dialogues) corpus.push_back(std::move(d));
  }
  std::vector<study::PlannedDialogue> planned;
  for (const RawDialogue& d : corpus) planned.push_back({d.dialogue_id, *d.label, o.rounds});
  const std::vector<std::string> participants = {"r1", "r2", "r3", "r4", "r5"};
  const study::StudyPlan plan = study::generate_plan(participants, planned, 8);
  const AlignmentEngine engine(make_default_providers());
  const auto content = service::load_study_content(corpus, plan, engine);

  std::vector<study::StudyEvent> log;
  service::ServiceConfig config;
  config.admin_token = "agent";
  int counter = 0;
  service::StudyService svc(
      plan, content, KeywordLexicon(load_resource(kScamKeywordsResource)), config,
      [&](const study::StudyEvent& e) { log.push_back(e); }, [] { return std::string("t"); },
      [&] { return "agent" + std::to_string(++counter); });
  auto post = [&](const std::string& path, const json& body) {
    service::Response r = svc.handle({"POST", path, body.dump(), "", {}});
    if (r.status != 200) throw std::runtime_error(path + " -> " + r.body);
    return json::parse(r.body);
  };

  std::size_t packet_checks = 0;
  for (const study::Assignment& a : plan.assignments) {
    const std::string token =
        post("/sessions", {{"participant", a.participant_id}, {"dialogue", a.dialogue_id}})["token"];
    const Trajectory& trajectory = content.at(a.dialogue_id).trajectory;
    bool fired = false;
    for (std::size_t r = 1; r <= 15 && !fired; ++r) {
      const json payload = post("/sessions/" + token + "/round",
                                r == 1 ? json::object() : json{{"confidence", 5}});
      fired = detect_pattern(window_scores(trajectory.scores, r)).active;
      if (a.condition == HintCondition::kMultiLevel) {
        c.expect(payload["hint_packet"]["pattern"]["active"] == fired,
                 "multi_level packet carries the same flag");
        ++packet_checks;
      }
    }
    post("/sessions/" + token + "/verdict",
         {{"verdict", fired ? "scam" : "non_scam"}, {"confidence", fired ? 9 : 2}});
  }
  const study::StudyReport report =
      study::compute_report(study::replay_events(log, plan), plan);
  std::size_t sessions = 0;
  for (std::size_t k = 0; k < 5; ++k) {
    const study::Metrics& m = report.per_condition[k];
    sessions += m.counts.tp + m.counts.fp + m.counts.fn + m.counts.tn;
    const std::string name(to_string(kAllConditions[k]));
    c.expect(m.precision == 1.0, "rule agent precision 1 under " + name);
    c.expect(m.recall == 1.0, "rule agent recall 1 under " + name);
  }
  c.expect(sessions == plan.assignments.size(), "every session closed");
  c.expect(svc.report_body() == study::render_report(report), "live report equals replay");
  detail = "rule agent P=R=1 over " + std::to_string(sessions) + " sessions (" +
           std::to_string(packet_checks) + " flag packets checked)";
}

Check study_metrics() {
  Check c;
  scripted_confusion(c);
  censored_confidence(c);
  std::string agent;
  rule_agent(c, agent);
  c.detail = "scripted confusion, censored confidence, " + agent;
  return c;
}

// ---------------------------------------------------------------------------
// 8. Replay equivalence against a live server

Check replay_equivalence() {
  Check c;
  const fs::path dir = g_work / "replay";
  fs::remove_all(dir);
  for (const char* kind : {"planted_decline", "flat"}) {
    require_cli({"synth", kind, "--n", "5", "--rounds", "20", "--seed", "13", "--decline-start",
                 "0.3", "--out", (dir / kind).string()},
                dir / (std::string(kind) + ".log"));
  }
  {
    std::ofstream corpus(dir / "corpus.jsonl", std::ios::binary);
    corpus << slurp(dir / "planted_decline/corpus.jsonl") << slurp(dir / "flat/corpus.jsonl");
  }
  require_cli({"plan", "--corpus", (dir / "corpus.jsonl").string(), "--participants", "3",
               "--seed", "2", "--out", (dir / "plan.json").string()},
              dir / "plan.log");

  int pipe_fds[2];
  if (pipe(pipe_fds) != 0) throw std::runtime_error("pipe failed");
  std::vector<std::string> args = {g_cli.string(),
                                   "serve",
                                   "--plan",
                                   (dir / "plan.json").string(),
                                   "--corpus",
                                   (dir / "corpus.jsonl").string(),
                                   "--events",
                                   (dir / "events.jsonl").string(),
                                   "--port",
                                   "0",
                                   "--admin-token",
                                   "secret"};
  std::vector<char*> argv;
  for (std::string& a : args) argv.push_back(a.data());
  argv.push_back(nullptr);
  const pid_t pid = fork();
  if (pid == 0) {
    dup2(pipe_fds[1], 1);
    close(pipe_fds[0]);
    execv(argv[0], argv.data());
    _exit(127);
  }
  close(pipe_fds[1]);
  FILE* out = fdopen(pipe_fds[0], "r");
  int port = 0;
  char line[256];
  while (port == 0 && std::fgets(line, sizeof line, out)) {
    const std::string s(line);
    if (s.rfind("listening on ", 0) == 0) port = std::stoi(s.substr(s.rfind(':') + 1));
  }
  std::string live;
  try {
    if (port == 0) throw std::runtime_error("server did not start");
    httplib::Client client("127.0.0.1", port);
    client.set_read_timeout(30, 0);
    const study::StudyPlan plan = study::plan_from_json(json::parse(slurp(dir / "plan.json")));
    int k = 0;
    for (const study::Assignment& a : plan.assignments) {
      if (++k % 6 == 0) continue;  // never started
      auto res = client.Post("/sessions",
                             json{{"participant", a.participant_id}, {"dialogue", a.dialogue_id}}
                                 .dump(),
                             "application/json");
      if (!res || res->status != 200) throw std::runtime_error("session create failed");
      const std::string token = json::parse(res->body)["token"];
      const int rounds = 1 + (k * 7) % 12;
      for (int r = 0; r < rounds; ++r) {
        const json body = r == 0 ? json::object() : json{{"confidence", 1 + (k + r) % 10}};
        res = client.Post("/sessions/" + token + "/round", body.dump(), "application/json");
        if (!res || res->status != 200) throw std::runtime_error("round failed");
      }
      if (k % 5 != 0) {  // some sessions stay open
        const json verdict = {{"verdict", k % 3 ? "scam" : "non_scam"},
                              {"confidence", 1 + k % 10}};
        res = client.Post("/sessions/" + token + "/verdict", verdict.dump(), "application/json");
        if (!res || res->status != 200) throw std::runtime_error("verdict failed");
      }
    }
    auto res = client.Get("/admin/report", {{"Authorization", "Bearer secret"}});
    if (!res || res->status != 200) throw std::runtime_error("admin report failed");
    live = res->body;
  } catch (...) {
    kill(pid, SIGTERM);
    waitpid(pid, nullptr, 0);
    std::fclose(out);
    throw;
  }
  kill(pid, SIGTERM);
  int status = 0;
  waitpid(pid, &status, 0);
  std::fclose(out);
  c.expect(WIFEXITED(status) && WEXITSTATUS(status) == 0, "server shuts down cleanly");

  require_cli({"report", "--plan", (dir / "plan.json").string(), "--events",
               (dir / "events.jsonl").string(), "--out", (dir / "report.json").string()},
              dir / "report.log");
  const std::string offline = slurp(dir / "report.json");
  c.expect(offline == live, "offline report differs from live /admin/report");
  const json parsed = json::parse(offline);
  c.detail = std::to_string(live.size()) + " bytes identical; " +
             std::to_string(parsed["completeness"]["closed"].get<int>()) + " closed, " +
             std::to_string(parsed["completeness"]["open"].get<int>()) + " open sessions";
  return c;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc != 3) {
    std::cerr << "usage: alignscope_acceptance <alignscope cli> <scratch dir>\n";
    return 2;
  }
  g_cli = fs::absolute(argv[1]);
  g_work = fs::absolute(argv[2]);
  fs::create_directories(g_work);

  const std::vector<std::pair<std::string, std::function<Check()>>> criteria = {
      {"alignment oracle", alignment_oracle},
      {"degenerate conventions", degenerate_conventions},
      {"statistics oracle", statistics_oracle},
      {"planted decline trend", planted_trend},
      {"pattern calibration", pattern_calibration},
      {"determinism", determinism},
      {"study metrics", study_metrics},
      {"replay equivalence", replay_equivalence},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Check result;
    try {
      result = criteria[i].second();
    } catch (const std::exception& e) {
      result.failures.push_back(std::string("exception: ") + e.what());
    }
    const bool pass = result.failures.empty();
    failed += !pass;
    std::cout << (pass ? "PASS" : "FAIL") << " [" << i + 1 << "] " << criteria[i].first;
    if (!result.detail.empty()) std::cout << ": " << result.detail;
    std::cout << '\n';
    for (std::size_t f = 0; f < result.failures.size() && f < 10; ++f) {
      std::cout << "    " << result.failures[f] << '\n';
    }
    if (result.failures.size() > 10) {
      std::cout << "    ... " << result.failures.size() - 10 << " more\n";
    }
    std::cout.flush();
  }
  std::cout << (failed ? "FAILED " : "ALL PASSED ") << criteria.size() - failed << "/"
            << criteria.size() << '\n';
  return failed ? 1 : 0;
}
