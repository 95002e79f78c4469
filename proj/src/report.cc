#include "nece/report.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <vector>

namespace nece {

namespace {

constexpr char kMaleColor[] = "#1f77b4";
constexpr char kFemaleColor[] = "#d95f02";
constexpr char kNeutralColor[] = "#999999";

std::string Escape(const std::string &s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default: out += c;
    }
  }
  return out;
}

// Fixed-precision coordinates keep the output byte-stable.
std::string Num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

std::string TypeLabel(const EventTypeKey &k) {
  std::string s = k.type.event_class;
  if (!k.type.sub_class.empty()) s += ", " + k.type.sub_class;
  return s + " (" + RoleName(k.role) + ")";
}

std::string RowLabel(const ResultKey &key) {
  switch (key.unit) {
    case AnalysisUnit::kUnigram:
      return TypeLabel(key.target);
    case AnalysisUnit::kBigramBefore:
      return TypeLabel(key.target) + " → " + TypeLabel(*key.anchor);
    case AnalysisUnit::kBigramAfter:
      return TypeLabel(*key.anchor) + " → " + TypeLabel(key.target);
    case AnalysisUnit::kSection:
      return std::string(PositionName(key.position)) + ": " + TypeLabel(key.target);
  }
  return TypeLabel(key.target);
}

const char *DirectionColor(const OddsRatioResult &r) {
  if (!r.significant) return kNeutralColor;
  return r.or_point >= 1.0 ? kMaleColor : kFemaleColor;
}

}  // namespace

std::string RenderOddsRatioChart(std::span<const OddsRatioResult> results,
                                 AnalysisUnit unit, const Lexicon &lexicon) {
  // Group order: female-tagged, male-tagged, untagged.
  struct Row {
    int group;
    const OddsRatioResult *r;
  };
  std::vector<Row> rows;
  for (const OddsRatioResult &r : results) {
    if (r.key.unit != unit) continue;
    auto tag = lexicon.ClassStereotype(r.key.target.type.event_class);
    int group = !tag ? 2 : (*tag == Stereotype::kFemale ? 0 : 1);
    rows.push_back({group, &r});
  }
  std::stable_sort(rows.begin(), rows.end(),
                   [](const Row &a, const Row &b) { return a.group < b.group; });

  // Log10 domain covering every point, interval and the reference line.
  double lo = 0.0, hi = 0.0;
  for (const Row &row : rows) {
    for (double v : {row.r->ci_low, row.r->ci_high, row.r->or_point}) {
      if (v > 0 && std::isfinite(v)) {
        lo = std::min(lo, std::log10(v));
        hi = std::max(hi, std::log10(v));
      }
    }
  }
  lo = std::floor(lo - 0.05);
  hi = std::ceil(hi + 0.05);
  if (hi - lo < 2) {
    lo -= 1;
    hi += 1;
  }

  const double left = 330, plot_w = 420, top = 50, row_h = 18;
  const int group_count = 3;
  const double header_h = 20;
  const double height = top + rows.size() * row_h + group_count * header_h + 50;
  const double width = left + plot_w + 30;
  auto x_of = [&](double v) {
    double lv = v > 0 ? std::log10(v) : lo;
    lv = std::clamp(lv, lo, hi);
    return left + (lv - lo) / (hi - lo) * plot_w;
  };

  std::string svg;
  svg += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + Num(width) +
         "\" height=\"" + Num(height) + "\" font-family=\"sans-serif\" font-size=\"11\">\n";
  svg += "<title>Odds ratios (male:female), unit " +
         std::string(AnalysisUnitName(unit)) + "</title>\n";
  svg += "<text x=\"" + Num(left) + "\" y=\"20\" font-size=\"14\">Odds ratio m:f by event type (" +
         std::string(AnalysisUnitName(unit)) + ")</text>\n";

  const double axis_y = height - 35;
  svg += "<g class=\"axes\">\n";
  svg += "<line class=\"x-axis\" x1=\"" + Num(left) + "\" y1=\"" + Num(axis_y) +
         "\" x2=\"" + Num(left + plot_w) + "\" y2=\"" + Num(axis_y) + "\" stroke=\"black\"/>\n";
  for (int e = static_cast<int>(lo); e <= static_cast<int>(hi); ++e) {
    const double x = x_of(std::pow(10.0, e));
    svg += "<line class=\"tick\" x1=\"" + Num(x) + "\" y1=\"" + Num(axis_y) + "\" x2=\"" +
           Num(x) + "\" y2=\"" + Num(axis_y + 5) + "\" stroke=\"black\"/>\n";
    char label[32];
    std::snprintf(label, sizeof(label), "%g", std::pow(10.0, e));
    svg += "<text x=\"" + Num(x) + "\" y=\"" + Num(axis_y + 18) +
           "\" text-anchor=\"middle\">" + label + "</text>\n";
  }
  const double ref_x = x_of(1.0);
  svg += "<line class=\"reference\" x1=\"" + Num(ref_x) + "\" y1=\"" + Num(top) +
         "\" x2=\"" + Num(ref_x) + "\" y2=\"" + Num(axis_y) +
         "\" stroke=\"black\" stroke-dasharray=\"4 3\"/>\n";
  svg += "</g>\n";

  static const char *kGroupNames[] = {"female stereotype", "male stereotype",
                                      "no stereotype tag"};
  double y = top;
  int current_group = -1;
  for (const Row &row : rows) {
    if (row.group != current_group) {
      current_group = row.group;
      y += header_h;
      svg += "<text class=\"group\" x=\"10\" y=\"" + Num(y - 5) +
             "\" font-weight=\"bold\">" + kGroupNames[row.group] + "</text>\n";
    }
    const OddsRatioResult &r = *row.r;
    const double cy = y + row_h / 2;
    const char *color = DirectionColor(r);
    svg += "<g class=\"row\">\n";
    svg += "<text x=\"10\" y=\"" + Num(cy + 4) + "\">" + Escape(RowLabel(r.key)) + "</text>\n";
    svg += "<line class=\"interval\" x1=\"" + Num(x_of(r.ci_low)) + "\" y1=\"" + Num(cy) +
           "\" x2=\"" + Num(x_of(r.ci_high)) + "\" y2=\"" + Num(cy) + "\" stroke=\"" +
           color + "\" stroke-width=\"2\"/>\n";
    if (r.significant) {
      svg += "<circle class=\"marker significant\" cx=\"" + Num(x_of(r.or_point)) +
             "\" cy=\"" + Num(cy) + "\" r=\"4\" fill=\"" + color + "\" stroke=\"" + color +
             "\"/>\n";
    } else {
      svg += "<circle class=\"marker not-significant\" cx=\"" + Num(x_of(r.or_point)) +
             "\" cy=\"" + Num(cy) + "\" r=\"4\" fill=\"white\" stroke=\"" + color + "\"/>\n";
    }
    svg += "</g>\n";
    y += row_h;
  }
  svg += "</svg>\n";
  return svg;
}

std::string RenderSignificanceShare(std::span<const OddsRatioResult> results) {
  struct Bar {
    std::string label;
    AnalysisUnit unit;
    Position position;  // kNone matches any
    int male = 0, female = 0, none = 0;
  };
  std::vector<Bar> bars = {
      {"unigram", AnalysisUnit::kUnigram, Position::kNone},
      {"bigram before", AnalysisUnit::kBigramBefore, Position::kNone},
      {"bigram after", AnalysisUnit::kBigramAfter, Position::kNone},
      {"section beginning", AnalysisUnit::kSection, Position::kBeginning},
      {"section middle", AnalysisUnit::kSection, Position::kMiddle},
      {"section end", AnalysisUnit::kSection, Position::kEnd},
  };
  for (const OddsRatioResult &r : results) {
    for (Bar &b : bars) {
      if (b.unit != r.key.unit) continue;
      if (b.position != Position::kNone && b.position != r.key.position) continue;
      if (!r.significant) {
        ++b.none;
      } else if (r.or_point >= 1.0) {
        ++b.male;
      } else {
        ++b.female;
      }
    }
  }

  const double left = 130, plot_w = 400, top = 40, bar_h = 22, gap = 10;
  const double height = top + bars.size() * (bar_h + gap) + 60;
  std::string svg;
  svg += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + Num(left + plot_w + 30) +
         "\" height=\"" + Num(height) + "\" font-family=\"sans-serif\" font-size=\"11\">\n";
  svg += "<title>Proportion of significant gender bias by analysis unit</title>\n";
  svg += "<text x=\"" + Num(left) +
         "\" y=\"20\" font-size=\"14\">Share of significant keys by analysis unit</text>\n";
  double y = top;
  for (const Bar &b : bars) {
    const int total = b.male + b.female + b.none;
    svg += "<g class=\"bar\" data-unit=\"" + Escape(b.label) + "\" data-total=\"" +
           std::to_string(total) + "\">\n";
    svg += "<text x=\"10\" y=\"" + Num(y + bar_h * 0.7) + "\">" + Escape(b.label) + "</text>\n";
    double x = left;
    const struct {
      const char *cls;
      int count;
      const char *color;
    } parts[] = {{"male-biased", b.male, kMaleColor},
                 {"female-biased", b.female, kFemaleColor},
                 {"not-significant", b.none, "#dddddd"}};
    for (const auto &p : parts) {
      const double w = total ? plot_w * p.count / total : 0.0;
      svg += "<rect class=\"share " + std::string(p.cls) + "\" data-count=\"" +
             std::to_string(p.count) + "\" x=\"" + Num(x) + "\" y=\"" + Num(y) +
             "\" width=\"" + Num(w) + "\" height=\"" + Num(bar_h) + "\" fill=\"" +
             p.color + "\"/>\n";
      x += w;
    }
    svg += "</g>\n";
    y += bar_h + gap;
  }
  svg += "<line class=\"x-axis\" x1=\"" + Num(left) + "\" y1=\"" + Num(y) + "\" x2=\"" +
         Num(left + plot_w) + "\" y2=\"" + Num(y) + "\" stroke=\"black\"/>\n";
  for (int pct = 0; pct <= 100; pct += 25) {
    const double x = left + plot_w * pct / 100.0;
    svg += "<text x=\"" + Num(x) + "\" y=\"" + Num(y + 15) + "\" text-anchor=\"middle\">" +
           std::to_string(pct) + "%</text>\n";
  }
  const double ly = y + 35;
  svg += "<rect x=\"" + Num(left) + "\" y=\"" + Num(ly - 9) + "\" width=\"10\" height=\"10\" fill=\"" +
         kMaleColor + "\"/><text x=\"" + Num(left + 14) + "\" y=\"" + Num(ly) +
         "\">male-biased</text>\n";
  svg += "<rect x=\"" + Num(left + 110) + "\" y=\"" + Num(ly - 9) +
         "\" width=\"10\" height=\"10\" fill=\"" + kFemaleColor + "\"/><text x=\"" +
         Num(left + 124) + "\" y=\"" + Num(ly) + "\">female-biased</text>\n";
  svg += "<rect x=\"" + Num(left + 230) + "\" y=\"" + Num(ly - 9) +
         "\" width=\"10\" height=\"10\" fill=\"#dddddd\"/><text x=\"" + Num(left + 244) +
         "\" y=\"" + Num(ly) + "\">not significant</text>\n";
  svg += "</svg>\n";
  return svg;
}

}  // namespace nece
