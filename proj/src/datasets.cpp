// Copyright 2026 The adgraph Authors.
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

#include "adgraph/datasets.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <thread>

#include "adgraph/extract.hpp"
#include "adgraph/rng.hpp"
#include "adgraph/similarity.hpp"
#include "adgraph/text.hpp"

namespace adgraph {
namespace {

// Evaluates pred(i) for i in [0, n) on worker threads; results land by
// index so the outcome does not depend on scheduling.
template <typename Pred>
std::vector<std::uint8_t> parallel_flags(std::size_t n, Pred pred) {
  std::vector<std::uint8_t> out(n, 0);
  const std::size_t workers =
      std::max<std::size_t>(1, std::min<std::size_t>(std::thread::hardware_concurrency(), n / 256));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) out[i] = pred(i) ? 1 : 0;
    return out;
  }
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (std::size_t i = w; i < n; i += workers) out[i] = pred(i) ? 1 : 0;
    });
  }
  for (auto& t : pool) t.join();
  return out;
}

std::string fixed(double v, int digits) {
  std::ostringstream os;
  os.setf(std::ios::fixed);
  os.precision(digits);
  os << v;
  return os.str();
}

}  // namespace

std::string_view side_name(Side s) { return s == Side::Train ? "train" : "test"; }

std::optional<Side> parse_side(std::string_view s) {
  if (s == "train") return Side::Train;
  if (s == "test") return Side::Test;
  return std::nullopt;
}

SplitAssignment split_components(std::span<const Component> components, double target,
                                 std::uint64_t seed) {
  if (!(target > 0.0 && target < 1.0)) throw std::invalid_argument("split target must be in (0,1)");
  std::size_t total = 0;
  for (const auto& c : components) total += c.members.size();

  std::vector<std::size_t> order(components.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  Rng rng(seed, "split");
  rng.shuffle(std::span<std::size_t>(order));

  SplitAssignment out;
  out.target = target;
  const double capacity = target * static_cast<double>(total);

  std::optional<std::size_t> giant;
  for (std::size_t i = 0; i < components.size(); ++i) {
    if (components[i].members.size() > kGiantComponentSize &&
        (!giant || components[i].members.size() > components[*giant].members.size())) {
      giant = i;
    }
  }
  if (components.size() == 1) giant = 0;

  std::size_t train = 0;
  if (giant) {
    out.component_side[components[*giant].id] = Side::Train;
    train += components[*giant].members.size();
    out.forced_giant = components[*giant].id;
  }
  for (std::size_t i : order) {
    if (giant && i == *giant) continue;
    const std::size_t size = components[i].members.size();
    if (static_cast<double>(train + size) <= capacity) {
      out.component_side[components[i].id] = Side::Train;
      train += size;
    } else {
      out.component_side[components[i].id] = Side::Test;
    }
  }
  SplitAssignment full = assignment_from_sides(components, out.component_side, target);
  full.forced_giant = out.forced_giant;
  if (components.size() == 1) {
    full.warnings.push_back("a single component holds every ad; the split is indivisible");
  } else if (std::abs(full.achieved - target) > 0.02) {
    full.warnings.push_back("achieved train fraction " + fixed(full.achieved, 4) +
                            " is far from the target " + fixed(target, 4));
  }
  return full;
}

SplitAssignment assignment_from_sides(std::span<const Component> components,
                                      const std::map<NodeId, Side>& sides, double target) {
  SplitAssignment out;
  out.target = target;
  out.component_side = sides;
  std::size_t total = 0;
  for (const auto& c : components) total += c.members.size();
  out.ad_side.assign(total, Side::Train);
  for (const auto& c : components) {
    auto it = sides.find(c.id);
    if (it == sides.end()) {
      throw std::runtime_error("component " + std::to_string(c.id) + " has no split side");
    }
    for (NodeId v : c.members) {
      if (v >= total) throw std::runtime_error("component member out of range");
      out.ad_side[v] = it->second;
    }
    (it->second == Side::Train ? out.train_ads : out.test_ads) += c.members.size();
  }
  out.achieved = total ? static_cast<double>(out.train_ads) / static_cast<double>(total) : 0.0;
  return out;
}

const std::string& dataset_text(const AdRecord& ad) {
  return ad.masked_description ? *ad.masked_description : ad.description;
}

OadDataset emit_oad(const RelatednessGraph& graph, std::span<const AdRecord> corpus,
                    const SplitAssignment& split, const OadOptions& options) {
  if (corpus.size() != graph.node_count || split.ad_side.size() != graph.node_count) {
    throw std::invalid_argument("emit_oad: corpus, graph and split disagree on ad count");
  }
  OadDataset out;
  std::vector<std::u32string> texts(corpus.size());
  for (std::size_t i = 0; i < corpus.size(); ++i) texts[i] = utf8_decode(dataset_text(corpus[i]));

  const auto similar = parallel_flags(graph.edges.size(), [&](std::size_t i) {
    const Edge& e = graph.edges[i];
    return similar_at_least(texts[e.a], texts[e.b], options.gate);
  });

  std::array<std::size_t, 2> edges_in_side{};
  for (std::size_t i = 0; i < graph.edges.size(); ++i) {
    const Edge& e = graph.edges[i];
    const Side sa = split.ad_side[e.a];
    if (sa != split.ad_side[e.b]) {
      ++out.cross_side_edges;
      continue;
    }
    auto& st = out.stats[static_cast<int>(sa)];
    ++st.edges;
    ++edges_in_side[static_cast<int>(sa)];
    if (similar[i]) {
      ++st.discarded_similar;
    } else {
      ++st.positives;
      out.pairs[static_cast<int>(sa)].push_back({e.a, e.b, true, sa});
    }
  }

  const Rng root(options.seed, "oad");
  for (Side side : kSides) {
    const int si = static_cast<int>(side);
    auto& st = out.stats[si];
    auto& pairs = out.pairs[si];
    std::vector<NodeId> nodes;
    for (NodeId v = 0; v < split.ad_side.size(); ++v) {
      if (split.ad_side[v] == side) nodes.push_back(v);
    }
    st.candidate_nodes = nodes.size();
    const std::size_t needed = st.positives;
    if (needed == 0) {
      out.warnings.push_back(std::string(side_name(side)) + ": no positive pairs, no negatives drawn");
      continue;
    }
    auto gated_out = [&](NodeId a, NodeId b) {
      return options.gate_negatives && similar_at_least(texts[a], texts[b], options.gate);
    };
    const std::uint64_t n = nodes.size();
    const std::uint64_t all_pairs = n < 2 ? 0 : n * (n - 1) / 2;
    const std::uint64_t available = all_pairs - edges_in_side[si];
    std::vector<OadPair> negatives;
    if (available <= needed) {
      for (std::size_t i = 0; i < nodes.size(); ++i) {
        for (std::size_t j = i + 1; j < nodes.size(); ++j) {
          if (graph.has_edge(nodes[i], nodes[j])) continue;
          if (gated_out(nodes[i], nodes[j])) {
            ++st.negatives_rejected_similar;
            continue;
          }
          negatives.push_back({nodes[i], nodes[j], false, side});
        }
      }
    } else {
      Rng rng = root.split(side_name(side));
      std::set<std::pair<NodeId, NodeId>> seen;
      const std::uint64_t max_attempts = 64 * static_cast<std::uint64_t>(needed) + 100000;
      for (std::uint64_t attempt = 0; attempt < max_attempts && negatives.size() < needed;
           ++attempt) {
        NodeId a = nodes[rng.uniform_index(n)];
        NodeId b = nodes[rng.uniform_index(n)];
        if (a == b) continue;
        if (a > b) std::swap(a, b);
        if (graph.has_edge(a, b) || !seen.insert({a, b}).second) continue;
        if (gated_out(a, b)) {
          ++st.negatives_rejected_similar;
          continue;
        }
        negatives.push_back({a, b, false, side});
      }
    }
    if (negatives.size() < needed) {
      out.warnings.push_back(std::string(side_name(side)) + ": only " +
                             std::to_string(negatives.size()) + " negatives for " +
                             std::to_string(needed) + " positives");
    }
    st.negatives = negatives.size();
    pairs.insert(pairs.end(), negatives.begin(), negatives.end());
    std::sort(pairs.begin(), pairs.end(), [](const OadPair& x, const OadPair& y) {
      return std::tie(x.a, x.b) < std::tie(y.a, y.b);
    });
  }
  if (graph.edges.empty()) out.warnings.push_back("graph has no edges; OAD dataset is empty");
  return out;
}

HtrpDataset emit_htrp(std::span<const AdRecord> corpus, std::span<const NodeId> component_of,
                      std::span<const LabeledComponent> labels, const SplitAssignment& split,
                      const HtrpOptions& options) {
  if (corpus.size() != component_of.size() || corpus.size() != split.ad_side.size()) {
    throw std::invalid_argument("emit_htrp: corpus, components and split disagree on ad count");
  }
  std::vector<std::int8_t> verdict(corpus.size(), -1);
  for (const auto& l : labels) {
    if (l.component_id >= verdict.size()) throw std::runtime_error("label for unknown component");
    verdict[l.component_id] = l.positive() ? 1 : 0;
  }
  HtrpDataset out;
  for (Side side : kSides) {
    const int si = static_cast<int>(side);
    std::array<SimilarityScreen, 2> screens = {SimilarityScreen(options.gate),
                                               SimilarityScreen(options.gate)};
    auto& st = out.stats[si];
    for (NodeId v = 0; v < corpus.size(); ++v) {
      if (split.ad_side[v] != side) continue;
      const std::int8_t label = verdict[component_of[v]];
      if (label < 0) {
        throw std::runtime_error("ad " + std::to_string(v) + " belongs to an unlabeled component");
      }
      ++st.candidates;
      SimilarityScreen& screen = screens[options.per_class_gate ? label : 0];
      if (!screen.admit_if_novel(utf8_decode(dataset_text(corpus[v])))) {
        ++st.discarded_similar;
        continue;
      }
      ++st.admitted;
      ++(label ? st.positives : st.negatives);
      out.examples[si].push_back({v, label == 1, side});
    }
    st.comparisons = screens[0].comparisons() + screens[1].comparisons();
    if (st.positives == 0 || st.negatives == 0) {
      out.warnings.push_back(std::string(side_name(side)) + ": HTRP split has a single class");
    }
  }
  return out;
}

MaskPrevalence mask_prevalence(const HtrpDataset& htrp, std::span<const AdRecord> corpus) {
  MaskPrevalence p;
  for (Side side : kSides) {
    const int si = static_cast<int>(side);
    for (const auto& ex : htrp.examples[si]) {
      const AdRecord& ad = corpus[ex.ad_id];
      for (EntityCategory c : kAllCategories) {
        auto& cell = p.cells[si][ex.positive ? 1 : 0][index_of(c)];
        ++cell.examples;
        if (ad.masked_description) cell.tokens += count_mask_tokens(*ad.masked_description, c);
      }
    }
  }
  return p;
}

BiasReport bias_report(const HtrpDataset& htrp, std::span<const AdRecord> corpus) {
  BiasReport r;
  r.prevalence = mask_prevalence(htrp, corpus);
  for (Side side : kSides) {
    const int si = static_cast<int>(side);
    const auto& pos = r.prevalence.cells[si][1];
    const auto& neg = r.prevalence.cells[si][0];
    if (!pos[0].defined() || !neg[0].defined()) continue;
    std::vector<double> x, y;
    for (std::size_t c = 0; c < kCategoryCount; ++c) {
      x.push_back(pos[c].value());
      y.push_back(neg[c].value());
    }
    r.tests[si] = wilcoxon_signed_rank(x, y);
  }
  return r;
}

ordered_json to_json(const SplitAssignment& split) {
  ordered_json j;
  j["target"] = split.target;
  j["achieved"] = split.achieved;
  j["train_ads"] = split.train_ads;
  j["test_ads"] = split.test_ads;
  std::size_t train_c = 0, test_c = 0;
  for (const auto& [id, side] : split.component_side) (side == Side::Train ? train_c : test_c)++;
  j["train_components"] = train_c;
  j["test_components"] = test_c;
  j["forced_giant"] = split.forced_giant ? ordered_json(*split.forced_giant) : ordered_json();
  j["warnings"] = split.warnings;
  return j;
}

ordered_json to_json(const OadDataset& oad) {
  ordered_json j;
  for (Side side : kSides) {
    const auto& st = oad.stats[static_cast<int>(side)];
    ordered_json s;
    s["edges"] = st.edges;
    s["positives"] = st.positives;
    s["discarded_similar"] = st.discarded_similar;
    s["negatives"] = st.negatives;
    s["negatives_rejected_similar"] = st.negatives_rejected_similar;
    s["candidate_nodes"] = st.candidate_nodes;
    const std::size_t total = st.positives + st.negatives;
    s["positive_ratio"] = total ? static_cast<double>(st.positives) / total : 0.0;
    j[std::string(side_name(side))] = s;
  }
  j["cross_side_edges"] = oad.cross_side_edges;
  j["warnings"] = oad.warnings;
  return j;
}

ordered_json to_json(const HtrpDataset& htrp) {
  ordered_json j;
  for (Side side : kSides) {
    const auto& st = htrp.stats[static_cast<int>(side)];
    ordered_json s;
    s["candidates"] = st.candidates;
    s["admitted"] = st.admitted;
    s["discarded_similar"] = st.discarded_similar;
    s["positives"] = st.positives;
    s["negatives"] = st.negatives;
    s["positive_ratio"] = st.admitted ? static_cast<double>(st.positives) / st.admitted : 0.0;
    s["comparisons"] = st.comparisons;
    j[std::string(side_name(side))] = s;
  }
  j["warnings"] = htrp.warnings;
  return j;
}

ordered_json to_json(const BiasReport& report) {
  ordered_json j;
  ordered_json rows = ordered_json::array();
  for (EntityCategory c : kAllCategories) {
    ordered_json row;
    row["mask"] = std::string(mask_token(c));
    for (Side side : kSides) {
      for (int cls : {1, 0}) {
        const auto& cell = report.prevalence.cells[static_cast<int>(side)][cls][index_of(c)];
        const std::string key = std::string(side_name(side)) + (cls ? "_positive" : "_negative");
        row[key] = cell.defined() ? ordered_json(cell.value()) : ordered_json();
      }
    }
    rows.push_back(row);
  }
  j["prevalence"] = rows;
  ordered_json tests;
  for (Side side : kSides) {
    const auto& t = report.tests[static_cast<int>(side)];
    ordered_json s;
    if (t) {
      s["statistic"] = t->statistic;
      s["w_plus"] = t->w_plus;
      s["w_minus"] = t->w_minus;
      s["n"] = t->n;
      s["p_value"] = t->p_value;
      s["exact"] = t->exact;
      s["all_zero"] = t->all_zero;
    } else {
      s = nullptr;
    }
    tests[std::string(side_name(side))] = s;
  }
  j["wilcoxon"] = tests;
  return j;
}

void write_split_csv(const std::filesystem::path& path, const SplitAssignment& split,
                     std::span<const Component> components) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << "component_id,side,size\n";
  for (const auto& c : components) {
    out << c.id << ',' << side_name(split.component_side.at(c.id)) << ',' << c.members.size()
        << '\n';
  }
}

std::map<NodeId, Side> read_split_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::string line;
  std::getline(in, line);
  std::map<NodeId, Side> out;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    std::istringstream row(line);
    std::string id, side;
    std::getline(row, id, ',');
    std::getline(row, side, ',');
    auto s = parse_side(side);
    if (!s) throw std::runtime_error("bad side in split file: " + line);
    out[static_cast<NodeId>(std::stoul(id))] = *s;
  }
  return out;
}

void write_oad_jsonl(const std::filesystem::path& path, std::span<const OadPair> pairs,
                     std::span<const AdRecord> corpus) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  for (const auto& p : pairs) {
    ordered_json j;
    j["ad_id_a"] = p.a;
    j["ad_id_b"] = p.b;
    j["text_a"] = dataset_text(corpus[p.a]);
    j["text_b"] = dataset_text(corpus[p.b]);
    j["label"] = p.positive ? 1 : 0;
    out << j.dump(-1, ' ', false, nlohmann::json::error_handler_t::replace) << '\n';
  }
}

void write_htrp_jsonl(const std::filesystem::path& path, std::span<const HtrpExample> examples,
                      std::span<const AdRecord> corpus) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  for (const auto& e : examples) {
    ordered_json j;
    j["ad_id"] = e.ad_id;
    j["text"] = dataset_text(corpus[e.ad_id]);
    j["label"] = e.positive ? 1 : 0;
    out << j.dump(-1, ' ', false, nlohmann::json::error_handler_t::replace) << '\n';
  }
}

}  // namespace adgraph
