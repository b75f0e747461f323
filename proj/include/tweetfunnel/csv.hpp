#pragma once

#include <string>
#include <string_view>

#include "tweetfunnel/funnel.hpp"
#include "tweetfunnel/metrics.hpp"

namespace tweetfunnel {

/// RFC 4180 field quoting: fields containing a comma, quote, CR or LF are
/// wrapped in quotes with embedded quotes doubled.
std::string csv_field(std::string_view field);

/// Shortest decimal form that reads back to the same double.
std::string format_double(double value);

/// "bucket_start_iso,bucket_start_epoch,tweets,actors,mentions" plus one row
/// per bucket.
std::string write_signature_csv(const TimeBucketSeries& series);

/// node_id,kind,label,in_deg,out_deg,betweenness,closeness,eigenvector
/// and, when `layout` is given, x,y.
std::string write_metrics_csv(const MultimodalGraph& graph, const CentralityReport& report,
                              const LayoutResult* layout = nullptr);

}  // namespace tweetfunnel
