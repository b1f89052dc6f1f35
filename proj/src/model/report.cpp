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

#include "adgraph/model/report.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <sstream>

namespace adgraph::model {
namespace {

constexpr std::size_t kBarWidth = 30;

std::string num(double v, int digits = 4) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(digits) << v;
  return os.str();
}

std::string label_text(std::optional<int> l) { return l ? std::to_string(*l) : "n/a"; }

std::string heat_style(double v, double scale) {
  if (v == 0.0 || scale == 0.0) return "";
  const double alpha = std::min(1.0, std::abs(v) / scale);
  std::ostringstream os;
  os << " style=\"background: rgba(" << (v > 0 ? "0,140,60," : "200,30,30,") << num(alpha, 3)
     << ")\"";
  return os.str();
}

std::string bar(double v, double scale) {
  if (scale == 0.0) return "";
  const auto len = static_cast<std::size_t>(std::lround(std::abs(v) / scale * kBarWidth));
  return std::string(len, v < 0 ? '-' : '+');
}

double max_abs_mean(std::span<const NgramScore> xs) {
  double m = 0.0;
  for (const auto& x : xs) m = std::max(m, std::abs(x.mean));
  return m;
}

std::vector<NgramScore> top_and_bottom(std::span<const NgramScore> ranked, std::size_t k,
                                       std::vector<NgramScore>& bottom) {
  const std::size_t t = std::min(k, ranked.size());
  std::vector<NgramScore> top(ranked.begin(), ranked.begin() + static_cast<long>(t));
  const std::size_t b = std::min(k, ranked.size() - t);
  bottom.assign(ranked.end() - static_cast<long>(b), ranked.end());
  return top;
}

void text_rows(std::ostringstream& os, std::span<const NgramScore> rows, double scale) {
  for (const auto& r : rows) {
    os << "  " << std::setw(10) << num(r.mean) << "  +/-" << std::setw(8) << num(r.stddev)
       << "  n=" << std::setw(5) << r.occurrences << "  " << std::left << std::setw(kBarWidth)
       << bar(r.mean, scale) << std::right << "  " << r.text() << '\n';
  }
}

void html_rows(std::ostringstream& os, std::span<const NgramScore> rows, double scale) {
  for (const auto& r : rows) {
    const double width = scale == 0.0 ? 0.0 : 100.0 * std::abs(r.mean) / scale;
    os << "<tr><td>" << html_escape(r.text()) << "</td><td>" << num(r.mean) << "</td><td>"
       << num(r.stddev) << "</td><td>" << r.occurrences << "</td><td><div class=\"bar "
       << (r.mean < 0 ? "neg" : "pos") << "\" style=\"width:" << num(width, 1)
       << "%\"></div></td></tr>\n";
  }
}

}  // namespace

std::string html_escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

std::string record_text(const AttributionRecord& r) {
  std::ostringstream os;
  os << "True label:         " << label_text(r.true_label) << '\n'
     << "Predicted label:    " << r.predicted_label << " (p=" << num(r.positive_probability) << ")\n"
     << "Attribution label:  " << r.target_class << '\n'
     << "Attribution score:  " << num(r.total_attribution()) << '\n'
     << "F(x) - F(x'):       " << num(r.f_input - r.f_baseline) << '\n'
     << "Convergence delta:  " << std::scientific << std::setprecision(3) << r.convergence_delta
     << std::defaultfloat << '\n'
     << '\n';
  double scale = 0.0;
  for (double a : r.attr) scale = std::max(scale, std::abs(a));
  for (std::size_t i = 0; i < r.tokens.size(); ++i) {
    os << "  " << std::setw(9) << num(r.attr[i]) << "  " << std::left << std::setw(kBarWidth)
       << bar(r.attr[i], scale) << std::right << "  " << r.tokens[i] << '\n';
  }
  return os.str();
}

std::string record_html(const AttributionRecord& r) {
  std::ostringstream os;
  os << "<table class=\"summary\">\n"
     << "<tr><th>True label</th><td>" << label_text(r.true_label) << "</td></tr>\n"
     << "<tr><th>Predicted label</th><td>" << r.predicted_label << " (p="
     << num(r.positive_probability) << ")</td></tr>\n"
     << "<tr><th>Attribution label</th><td>" << r.target_class << "</td></tr>\n"
     << "<tr><th>Attribution score</th><td>" << num(r.total_attribution()) << "</td></tr>\n"
     << "<tr><th>Convergence delta</th><td>" << r.convergence_delta << "</td></tr>\n"
     << "</table>\n<p class=\"heat\">";
  double scale = 0.0;
  for (double a : r.attr) scale = std::max(scale, std::abs(a));
  for (std::size_t i = 0; i < r.tokens.size(); ++i) {
    os << "<span title=\"" << num(r.attr[i]) << "\"" << heat_style(r.attr[i], scale) << ">"
       << html_escape(r.tokens[i]) << "</span> ";
  }
  os << "</p>\n";
  return os.str();
}

std::string ngram_table_text(std::span<const NgramScore> ranked, std::size_t k,
                             std::string_view title) {
  std::vector<NgramScore> bottom;
  const auto top = top_and_bottom(ranked, k, bottom);
  const double scale = max_abs_mean(ranked);
  std::ostringstream os;
  os << title << "\n\nTop " << top.size() << '\n';
  text_rows(os, top, scale);
  os << "\nBottom " << bottom.size() << '\n';
  text_rows(os, bottom, scale);
  return os.str();
}

std::string ngram_table_html(std::span<const NgramScore> ranked, std::size_t k,
                             std::string_view title) {
  std::vector<NgramScore> bottom;
  const auto top = top_and_bottom(ranked, k, bottom);
  const double scale = max_abs_mean(ranked);
  std::ostringstream os;
  os << "<h2>" << html_escape(title) << "</h2>\n";
  for (int part = 0; part < 2; ++part) {
    const auto& rows = part == 0 ? top : bottom;
    os << "<h3>" << (part == 0 ? "Top " : "Bottom ") << rows.size() << "</h3>\n"
       << "<table class=\"ngrams\"><tr><th>n-gram</th><th>mean</th><th>std</th><th>count</th>"
          "<th></th></tr>\n";
    html_rows(os, rows, scale);
    os << "</table>\n";
  }
  return os.str();
}

std::string mask_table_text(std::span<const NgramScore> masks) {
  std::ostringstream os;
  os << "Mask token attribution\n";
  text_rows(os, masks, max_abs_mean(masks));
  return os.str();
}

std::string mask_table_html(std::span<const NgramScore> masks) {
  std::ostringstream os;
  os << "<h2>Mask token attribution</h2>\n<table class=\"ngrams\"><tr><th>token</th><th>mean</th>"
        "<th>std</th><th>count</th><th></th></tr>\n";
  html_rows(os, masks, max_abs_mean(masks));
  os << "</table>\n";
  return os.str();
}

std::string html_document(std::string_view title, std::string_view body) {
  std::ostringstream os;
  os << "<!DOCTYPE html>\n<html><head><meta charset=\"utf-8\"><title>" << html_escape(title)
     << "</title>\n<style>\n"
     << "body { font-family: sans-serif; max-width: 60em; margin: 2em auto; }\n"
     << "table { border-collapse: collapse; margin-bottom: 1em; }\n"
     << "td, th { padding: 2px 8px; text-align: left; }\n"
     << ".heat span { padding: 1px 2px; line-height: 1.8; }\n"
     << ".bar { height: 0.8em; } .bar.pos { background: #2a8c4a; } .bar.neg { background: #c83232; }\n"
     << "td:last-child { width: 12em; }\n"
     << "</style></head><body>\n<h1>" << html_escape(title) << "</h1>\n"
     << body << "</body></html>\n";
  return os.str();
}

}  // namespace adgraph::model
