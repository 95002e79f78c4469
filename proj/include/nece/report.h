#ifndef NECE_REPORT_H_
#define NECE_REPORT_H_

#include <span>
#include <string>

#include "nece/lexicon.h"
#include "nece/stats.h"

namespace nece {

// Log-scale dot-and-interval chart of the odds ratios of one analysis unit,
// rows grouped by the stereotype tag of the target class (female, male,
// untagged). Rows of other units are ignored. Each row gets exactly one
// <circle class="marker ..."> element: filled and coloured by direction
// when significant, hollow grey ("not-significant") otherwise. With no
// rows the axes are still drawn.
std::string RenderOddsRatioChart(std::span<const OddsRatioResult> results,
                                 AnalysisUnit unit, const Lexicon &lexicon);

// Stacked bars of the share of male-biased, female-biased and
// non-significant keys per analysis unit (sections split by position).
std::string RenderSignificanceShare(std::span<const OddsRatioResult> results);

}  // namespace nece

#endif  // NECE_REPORT_H_
