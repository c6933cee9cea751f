// Copyright 2026 The AIC Toolkit Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#include "bench/benchmark.h"

#include <algorithm>
#include <array>
#include <set>
#include <utility>

#include "absl/strings/ascii.h"
#include "absl/strings/match.h"
#include "absl/strings/numbers.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "absl/strings/str_split.h"
#include "absl/strings/string_view.h"
#include "absl/strings/strip.h"
#include "bench/correlation.h"
#include "common/file_io.h"
#include "common/status_macros.h"

namespace aic::bench {

absl::StatusOr<MetricScoreTable> ParseScoreTable(const std::string& text,
                                                 const std::string& fallback_name) {
  MetricScoreTable table;
  table.metric = fallback_name;
  int line_no = 0;
  for (absl::string_view line : absl::StrSplit(text, '\n')) {
    ++line_no;
    line = absl::StripAsciiWhitespace(line);
    if (line.empty()) continue;
    if (line.front() == '#') {
      absl::string_view body = absl::StripAsciiWhitespace(line.substr(1));
      if (absl::ConsumePrefix(&body, "metric:")) {
        table.metric = std::string(absl::StripAsciiWhitespace(body));
      } else if (absl::ConsumePrefix(&body, "polarity:")) {
        body = absl::StripAsciiWhitespace(body);
        if (body == "higher-is-better") {
          table.polarity = Polarity::kHigherIsBetter;
        } else if (body == "higher-is-worse") {
          table.polarity = Polarity::kHigherIsWorse;
        } else {
          return absl::InvalidArgumentError(absl::StrCat("unknown polarity '", body, "'"));
        }
      }
      continue;
    }
    std::vector<absl::string_view> f = absl::StrSplit(line, absl::ByAnyChar("\t "),
                                                     absl::SkipEmpty());
    if (!f.empty() && f[0] == "source_id") continue;  // optional column header
    StimulusKey key;
    if (f.size() != 4 || !absl::SimpleAtoi(f[2], &key.level)) {
      return absl::InvalidArgumentError(
          absl::StrCat(table.metric, " line ", line_no, ": expected source codec level score"));
    }
    key.source_id = std::string(f[0]);
    key.codec_id = std::string(f[1]);
    std::optional<double> score;
    double v = 0;
    if (f[3] != "NA") {
      if (!absl::SimpleAtod(f[3], &v)) {
        return absl::InvalidArgumentError(
            absl::StrCat(table.metric, " line ", line_no, ": bad score '", f[3], "'"));
      }
      score = v;
    }
    if (!table.scores.emplace(key, score).second) {
      return absl::InvalidArgumentError(absl::StrCat(table.metric, " line ", line_no,
                                                     ": duplicate stimulus"));
    }
  }
  return table;
}

absl::StatusOr<MetricScoreTable> LoadScoreTable(const std::filesystem::path& path) {
  AIC_ASSIGN_OR_RETURN(std::string text, ReadFile(path));
  return ParseScoreTable(text, path.stem().string());
}

std::string SerializeScoreTable(const MetricScoreTable& table) {
  std::string out = absl::StrCat(
      "# metric: ", table.metric, "\n# polarity: ",
      table.polarity == Polarity::kHigherIsBetter ? "higher-is-better" : "higher-is-worse",
      "\nsource_id\tcodec_id\tlevel\tscore\n");
  for (const auto& [k, v] : table.scores) {
    absl::StrAppend(&out, k.source_id, "\t", k.codec_id, "\t", k.level, "\t",
                    v ? absl::StrFormat("%.10g", *v) : std::string("NA"), "\n");
  }
  return out;
}

absl::StatusOr<std::vector<MetricScoreTable>> LoadScoreDirectory(
    const std::filesystem::path& dir) {
  std::vector<std::filesystem::path> files;
  std::error_code ec;
  for (const auto& entry : std::filesystem::directory_iterator(dir, ec)) {
    const auto ext = entry.path().extension();
    if (entry.is_regular_file() && (ext == ".tsv" || ext == ".txt")) {
      files.push_back(entry.path());
    }
  }
  if (ec) {
    return absl::NotFoundError(absl::StrCat("cannot list ", dir.string(), ": ", ec.message()));
  }
  std::sort(files.begin(), files.end());
  std::vector<MetricScoreTable> out;
  for (const auto& f : files) {
    AIC_ASSIGN_OR_RETURN(auto t, LoadScoreTable(f));
    out.push_back(std::move(t));
  }
  return out;
}

absl::Status CheckCoverage(const MetricScoreTable& table,
                           const catalog::StudyManifest& manifest) {
  for (const auto& st : manifest.stimuli) {
    if (!table.scores.count({st.source_id, st.codec_id, st.level})) {
      return absl::InvalidArgumentError(
          absl::StrCat(table.metric, ": no score row for (", st.source_id, ", ",
                       st.codec_id, ", ", st.level, ")"));
    }
  }
  for (const auto& [k, v] : table.scores) {
    if (manifest.FindStimulus(k.source_id, k.codec_id, k.level) == nullptr) {
      return absl::InvalidArgumentError(absl::StrCat(table.metric, ": unknown stimulus (",
                                                     k.source_id, ", ", k.codec_id, ", ",
                                                     k.level, ")"));
    }
  }
  return absl::OkStatus();
}

absl::StatusOr<JndMap> JndFromModels(const scale::ModelFile& models,
                                     const catalog::StudyManifest& manifest) {
  JndMap out;
  for (const auto& st : manifest.stimuli) {
    const auto* m = models.Find(st.source_id);
    if (m == nullptr) continue;
    const auto* p = m->Find(st.codec_id);
    if (p == nullptr) continue;
    out[{st.source_id, st.codec_id, st.level}] = scale::RdDistortion(*p, st.actual_bpp);
  }
  if (out.empty()) return absl::FailedPreconditionError("models cover no stimulus");
  return out;
}

absl::StatusOr<JndMap> JndFromBands(const std::vector<scale::RdCurveBand>& bands,
                                    const catalog::StudyManifest& manifest) {
  JndMap out;
  for (const auto& st : manifest.stimuli) {
    for (const auto& b : bands) {
      if (b.source_id != st.source_id || b.codec_id != st.codec_id || b.bpp.empty()) {
        continue;
      }
      const auto it = std::lower_bound(b.bpp.begin(), b.bpp.end(), st.actual_bpp);
      size_t i = static_cast<size_t>(it - b.bpp.begin());
      double value;
      if (i == 0) {
        value = b.estimate.front();
      } else if (i >= b.bpp.size()) {
        value = b.estimate.back();
      } else {
        const double t = (st.actual_bpp - b.bpp[i - 1]) / (b.bpp[i] - b.bpp[i - 1]);
        value = b.estimate[i - 1] + t * (b.estimate[i] - b.estimate[i - 1]);
      }
      out[{st.source_id, st.codec_id, st.level}] = value;
    }
  }
  if (out.empty()) return absl::FailedPreconditionError("bands cover no stimulus");
  return out;
}

namespace {

struct Paired {
  std::vector<double> score;
  std::vector<double> jnd;
  size_t dropped = 0;
};

template <typename Pred>
Paired Pair(const MetricScoreTable& table, const JndMap& jnd, Pred keep) {
  Paired out;
  for (const auto& [key, d] : jnd) {
    if (!keep(key)) continue;
    auto it = table.scores.find(key);
    if (it == table.scores.end() || !it->second) {
      ++out.dropped;
      continue;
    }
    out.score.push_back(*it->second);
    out.jnd.push_back(d);
  }
  return out;
}

}  // namespace

absl::StatusOr<GroupedCorrelation> GroupedCorrelationOf(const MetricScoreTable& table,
                                                        const JndMap& jnd,
                                                        GroupBy group_by) {
  std::set<std::string> groups;
  for (const auto& [key, d] : jnd) {
    groups.insert(group_by == GroupBy::kCodec ? key.codec_id : key.source_id);
  }
  GroupedCorrelation out;
  double sum_p = 0;
  double sum_s = 0;
  for (const auto& g : groups) {
    const Paired pr = Pair(table, jnd, [&](const StimulusKey& k) {
      return (group_by == GroupBy::kCodec ? k.codec_id : k.source_id) == g;
    });
    auto p = Plcc(pr.score, pr.jnd);
    auto s = Srcc(pr.score, pr.jnd);
    if (!p.ok() || !s.ok()) {
      out.warnings.push_back(absl::StrCat(table.metric, ": group '", g, "' excluded: ",
                                          (!p.ok() ? p : s).status().message()));
      continue;
    }
    if (pr.dropped > 0) {
      out.warnings.push_back(absl::StrCat(table.metric, ": group '", g, "' dropped ",
                                          pr.dropped, " missing scores"));
    }
    out.groups.push_back({g, pr.score.size(), *p, *s});
    sum_p += *p;
    sum_s += *s;
  }
  if (out.groups.empty()) {
    return absl::FailedPreconditionError(
        absl::StrCat(table.metric, ": every group is degenerate"));
  }
  out.mean_plcc = sum_p / static_cast<double>(out.groups.size());
  out.mean_srcc = sum_s / static_cast<double>(out.groups.size());
  return out;
}

absl::StatusOr<CorrelationReport> Correlate(const MetricScoreTable& table,
                                            const JndMap& jnd) {
  CorrelationReport r;
  r.metric = table.metric;
  r.polarity = table.polarity;
  const Paired all = Pair(table, jnd, [](const StimulusKey&) { return true; });
  if (all.dropped > 0) {
    r.warnings.push_back(
        absl::StrCat(table.metric, ": ", all.dropped, " stimuli without a score dropped"));
  }
  r.n = all.score.size();
  AIC_ASSIGN_OR_RETURN(r.plcc, Plcc(all.score, all.jnd));
  AIC_ASSIGN_OR_RETURN(r.srcc, Srcc(all.score, all.jnd));
  AIC_ASSIGN_OR_RETURN(r.per_codec, GroupedCorrelationOf(table, jnd, GroupBy::kCodec));
  AIC_ASSIGN_OR_RETURN(r.per_source, GroupedCorrelationOf(table, jnd, GroupBy::kSource));
  for (const auto* g : {&r.per_codec, &r.per_source}) {
    r.warnings.insert(r.warnings.end(), g->warnings.begin(), g->warnings.end());
  }
  return r;
}

namespace {

// Scores oriented so that larger means more distortion.
double Oriented(const MetricScoreTable& t, double v) {
  return t.polarity == Polarity::kHigherIsBetter ? -v : v;
}

std::optional<MrrResult> TestOn(const std::vector<double>& sa, const std::vector<double>& sb,
                                const std::vector<double>& d) {
  auto ra = Srcc(sa, d);
  auto rb = Srcc(sb, d);
  auto rab = Srcc(sa, sb);
  if (!ra.ok() || !rb.ok() || !rab.ok()) return std::nullopt;
  auto t = MengRosenthalRubin(*ra, *rb, *rab, static_cast<int>(d.size()));
  if (!t.ok()) return std::nullopt;
  return *t;
}

}  // namespace

absl::string_view ScopeName(SignificanceScope scope) {
  switch (scope) {
    case SignificanceScope::kPerCodec:
      return "per-codec";
    case SignificanceScope::kPerSource:
      return "per-source";
    case SignificanceScope::kOverall:
      break;
  }
  return "overall";
}

absl::StatusOr<SignificanceScope> ParseScope(absl::string_view name) {
  if (name == "overall") return SignificanceScope::kOverall;
  if (name == "per-codec") return SignificanceScope::kPerCodec;
  if (name == "per-source") return SignificanceScope::kPerSource;
  return absl::InvalidArgumentError(absl::StrCat("unknown significance scope '", name, "'"));
}

std::vector<SignificanceEntry> PairwiseSignificance(
    const std::vector<MetricScoreTable>& tables, const JndMap& jnd,
    SignificanceScope scope) {
  std::vector<SignificanceEntry> out;
  for (size_t a = 0; a < tables.size(); ++a) {
    for (size_t b = 0; b < tables.size(); ++b) {
      if (a == b) continue;
      // Group -> (oriented a, oriented b, jnd).
      std::map<std::string, std::array<std::vector<double>, 3>> groups;
      for (const auto& [key, value] : jnd) {
        auto ia = tables[a].scores.find(key);
        auto ib = tables[b].scores.find(key);
        if (ia == tables[a].scores.end() || ib == tables[b].scores.end() ||
            !ia->second || !ib->second) {
          continue;
        }
        const std::string g = scope == SignificanceScope::kPerCodec    ? key.codec_id
                              : scope == SignificanceScope::kPerSource ? key.source_id
                                                                       : "";
        auto& v = groups[g];
        v[0].push_back(Oriented(tables[a], *ia->second));
        v[1].push_back(Oriented(tables[b], *ib->second));
        v[2].push_back(value);
      }
      SignificanceEntry e{tables[a].metric, tables[b].metric, 0, 0, 1, 0};
      double z_sum = 0;
      bool ok = !groups.empty();
      for (const auto& [g, v] : groups) {
        auto t = TestOn(v[0], v[1], v[2]);
        if (!t) {
          ok = false;
          break;
        }
        z_sum += t->z;
        e.n += v[2].size();
        ++e.groups;
      }
      if (ok) {
        e.z = z_sum / std::sqrt(static_cast<double>(e.groups));
        e.p = TwoSidedNormalP(e.z);
      } else {
        e.z = std::nan("");
        e.p = std::nan("");
      }
      out.push_back(std::move(e));
    }
  }
  return out;
}

std::string RenderReport(const std::vector<CorrelationReport>& reports,
                         const std::vector<SignificanceEntry>* significance,
                         SignificanceScope scope) {
  std::string out =
      "# Correlations against reconstructed distortion (JND); no sign normalization.\n"
      "#metric\tpolarity\tn\toverall_plcc\toverall_srcc\tper_codec_plcc\tper_codec_srcc\t"
      "per_source_plcc\tper_source_srcc\n";
  for (const auto& r : reports) {
    absl::StrAppend(
        &out, absl::StrFormat("%s\t%s\t%d\t%.3f\t%.3f\t%.3f\t%.3f\t%.3f\t%.3f\n", r.metric,
                              r.polarity == Polarity::kHigherIsBetter ? "higher-is-better"
                                                                      : "higher-is-worse",
                              r.n, r.plcc, r.srcc, r.per_codec.mean_plcc,
                              r.per_codec.mean_srcc, r.per_source.mean_plcc,
                              r.per_source.mean_srcc));
  }
  for (const auto& r : reports) {
    for (const auto& w : r.warnings) absl::StrAppend(&out, "# warning: ", w, "\n");
  }
  if (significance != nullptr && !significance->empty()) {
    out +=
        absl::StrCat("\n# Pairwise Meng-Rosenthal-Rubin tests on ", ScopeName(scope),
                     " SRCC (row vs column), scores oriented by declared polarity.\n");
    if (scope != SignificanceScope::kOverall) {
      out += "# Per-group z values combined as sum(z)/sqrt(groups).\n";
    }
    out += "# The Fisher transform is applied to rank correlations, an approximation.\n";
    std::vector<std::string> names;
    for (const auto& r : reports) names.push_back(r.metric);
    auto find = [&](const std::string& a, const std::string& b) -> const SignificanceEntry* {
      for (const auto& e : *significance) {
        if (e.metric_a == a && e.metric_b == b) return &e;
      }
      return nullptr;
    };
    for (const char* what : {"z", "p"}) {
      absl::StrAppend(&out, "#", what);
      for (const auto& n : names) absl::StrAppend(&out, "\t", n);
      out += "\n";
      for (const auto& a : names) {
        absl::StrAppend(&out, what, ":", a);
        for (const auto& b : names) {
          const auto* e = find(a, b);
          if (e == nullptr) {
            out += "\t-";
          } else {
            absl::StrAppend(&out, what[0] == 'z' ? absl::StrFormat("\t%.4f", e->z) : absl::StrFormat("\t%.3g", e->p));
          }
        }
        out += "\n";
      }
    }
  }
  return out;
}

}  // namespace aic::bench
