#include "tweetfunnel/csv.hpp"

#include <array>
#include <charconv>
#include <sstream>

#include "tweetfunnel/error.hpp"

namespace tweetfunnel {

std::string csv_field(std::string_view field) {
  if (field.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(field);
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::string format_double(double value) {
  std::array<char, 64> buf{};
  const auto r = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  return std::string(buf.data(), r.ptr);
}

std::string write_signature_csv(const TimeBucketSeries& series) {
  std::ostringstream out;
  out << "bucket_start_iso,bucket_start_epoch,tweets,actors,mentions\n";
  for (const TimeBucket& b : series.buckets) {
    out << csv_field(format_iso8601(b.start)) << ',' << b.start << ',' << b.tweet_count << ','
        << b.unique_actor_count << ',' << b.mention_edge_count << '\n';
  }
  return out.str();
}

std::string write_metrics_csv(const MultimodalGraph& graph, const CentralityReport& report,
                              const LayoutResult* layout) {
  if (report.rows.size() != graph.node_count() ||
      (layout && layout->positions.size() != graph.node_count())) {
    throw Error(Errc::InvalidArgument, "metrics/layout do not match graph");
  }
  std::ostringstream out;
  out << "node_id,kind,label,in_deg,out_deg,betweenness,closeness,eigenvector";
  if (layout) out << ",x,y";
  out << '\n';
  std::size_t i = 0;
  for (const auto& [key, data] : graph.nodes()) {
    const CentralityRow& row = report.rows[i];
    out << csv_field(key.external_id()) << ',' << to_string(key.kind) << ',' << csv_field(data.label)
        << ',' << row.degree.in << ',' << row.degree.out << ',' << format_double(row.betweenness)
        << ',' << format_double(row.closeness) << ',' << format_double(row.eigenvector);
    if (layout) {
      out << ',' << format_double(layout->positions[i].x) << ',' << format_double(layout->positions[i].y);
    }
    out << '\n';
    ++i;
  }
  return out.str();
}

}  // namespace tweetfunnel
