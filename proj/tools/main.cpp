// tweetfunnel: command-line front end for the ingest -> store -> build ->
// filter -> metrics -> layout -> export funnel.

#include <CLI11.hpp>
#include <json.hpp>

#include <functional>
#include <iostream>
#include <map>
#include <sstream>

#include "tweetfunnel/csv.hpp"
#include "tweetfunnel/error.hpp"
#include "tweetfunnel/funnel.hpp"
#include "tweetfunnel/gexf.hpp"
#include "tweetfunnel/graph.hpp"
#include "tweetfunnel/loopback.hpp"
#include "tweetfunnel/metrics.hpp"
#include "tweetfunnel/pipeline.hpp"

namespace tf = tweetfunnel;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

enum ExitCode { kOk = 0, kUsage = 1, kPartial = 2, kFatalIo = 3 };

struct Options {
  std::string config_path;
  std::string store;
  std::string topic;
  std::vector<std::string> keywords;
  std::string input;
  std::string in_gexf;
  std::string out = "-";
  std::string gexf_out;
  std::string format = "gexf";
  std::string bucket_start;
  std::string labels = "text";
  std::uint32_t shards = 3;
  double speed = 0.0;
  double bucket_hours = 5.0;
  std::uint32_t min_degree = 0;
  bool drop_retweets = false;
  bool drop_isolated = false;
  bool dynamic = false;
  std::uint64_t seed = 42;
  int iterations = 100;
  unsigned workers = 1;
  std::uint16_t port = 0;
  unsigned clients = 1;
};

// Config-file keys and how to apply them when the flag was not given.
struct ConfigBinding {
  std::vector<CLI::Option*> options;
  std::function<void(const json&)> apply;
};

std::map<std::string, ConfigBinding>& bindings() {
  static std::map<std::string, ConfigBinding> b;
  return b;
}

template <typename T>
void bind_config(const std::string& key, CLI::Option* opt, T& target) {
  auto& binding = bindings()[key];
  binding.options.push_back(opt);
  binding.apply = [&target](const json& v) { target = v.get<T>(); };
}

void bind_keywords(CLI::Option* opt, std::vector<std::string>& target) {
  auto& binding = bindings()["keywords"];
  binding.options.push_back(opt);
  binding.apply = [&target](const json& v) {
    if (v.is_string()) {
      target.clear();
      std::stringstream ss(v.get<std::string>());
      for (std::string k; std::getline(ss, k, ',');) target.push_back(k);
    } else {
      target = v.get<std::vector<std::string>>();
    }
  };
}

void apply_config(const std::string& path) {
  const json cfg = json::parse(tf::read_file(path), nullptr, false);
  if (cfg.is_discarded() || !cfg.is_object()) {
    throw tf::Error(tf::Errc::InvalidArgument, "config " + path + " is not a JSON object");
  }
  for (const auto& [key, value] : cfg.items()) {
    auto it = bindings().find(key);
    if (it == bindings().end()) continue;
    bool given = false;
    for (CLI::Option* opt : it->second.options) given = given || opt->count() > 0;
    if (given) continue;
    try {
      it->second.apply(value);
    } catch (const json::exception& e) {
      throw tf::Error(tf::Errc::InvalidArgument, "config key '" + key + "': " + e.what());
    }
  }
}

void emit(const std::string& out, std::string_view content) {
  if (out == "-") {
    std::cout << content;
  } else {
    tf::write_file(out, content);
  }
}

tf::Timestamp bucket_width(const Options& o) {
  tf::PipelineConfig c;
  c.bucket_hours = o.bucket_hours;
  return c.bucket_width();
}

std::optional<tf::TimeRange> bucket_range(const Options& o) {
  if (o.bucket_start.empty()) return std::nullopt;
  const auto start = tf::parse_iso8601(o.bucket_start);
  if (!start) throw tf::Error(tf::Errc::InvalidArgument, "bad --bucket-start '" + o.bucket_start + "'");
  return tf::TimeRange{*start, *start + bucket_width(o)};
}

tf::PipelineConfig pipeline_config(const Options& o) {
  tf::PipelineConfig c;
  c.store_root = o.store;
  c.topic = tf::make_topic(o.topic, o.keywords);
  c.shard_count = o.shards;
  c.bucket_hours = o.bucket_hours;
  c.min_degree = o.min_degree;
  c.drop_retweets = o.drop_retweets;
  c.drop_isolated = o.drop_isolated;
  c.seed = o.seed;
  c.layout_iterations = o.iterations;
  c.workers = o.workers;
  c.dynamic = o.dynamic;
  c.tweet_labels = o.labels == "id" ? tf::TweetLabelMode::Id : tf::TweetLabelMode::Text;
  return c;
}

tf::GexfWriteOptions gexf_options(const Options& o) {
  tf::GexfWriteOptions w;
  w.dynamic = o.dynamic;
  w.tweet_labels = o.labels == "id" ? tf::TweetLabelMode::Id : tf::TweetLabelMode::Text;
  return w;
}

tf::ShardStore open_existing(const Options& o) {
  if (!fs::exists(fs::path(o.store) / "manifest.json")) {
    throw tf::Error(tf::Errc::IOFailure, "no store at " + o.store);
  }
  return tf::ShardStore::open(o.store);
}

tf::MultimodalGraph load_gexf(const std::string& path) {
  return tf::parse_gexf(tf::read_file(path)).graph;
}

json summary_json(const tf::IngestSummary& s) {
  return json{{"parsed", s.parsed},
              {"matched", s.matched},
              {"stored", s.stored},
              {"reordered", s.reordered},
              {"parse_errors", s.parse_errors}};
}

int exit_code_for(const tf::Error& e) {
  switch (e.code()) {
    case tf::Errc::IOFailure:
    case tf::Errc::StorageFull:
    case tf::Errc::SourceUnreadable:
      return kFatalIo;
    default:
      return kUsage;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Funnel topical tweet streams into filtered interaction networks"};
  app.require_subcommand(1);
  Options o;
  app.add_option("--config", o.config_path, "JSON file with option defaults (flags win)");

  auto store_opt = [&](CLI::App* cmd) { bind_config("store", cmd->add_option("--store", o.store, "Store root directory"), o.store); };
  auto topic_opt = [&](CLI::App* cmd) { bind_config("topic", cmd->add_option("--topic", o.topic, "Topic (collection) name"), o.topic); };
  auto keywords_opt = [&](CLI::App* cmd) {
    bind_keywords(cmd->add_option("--keywords", o.keywords, "Comma-separated topical keywords")->delimiter(','), o.keywords);
  };
  auto out_opt = [&](CLI::App* cmd, const char* help) { bind_config("out", cmd->add_option("--out", o.out, help), o.out); };
  auto bucket_opts = [&](CLI::App* cmd) {
    bind_config("bucket_hours", cmd->add_option("--bucket-hours", o.bucket_hours, "Bucket width in hours")->check(CLI::PositiveNumber), o.bucket_hours);
    bind_config("bucket_start", cmd->add_option("--bucket-start", o.bucket_start, "Bucket start (ISO-8601 UTC)"), o.bucket_start);
  };
  auto filter_opts = [&](CLI::App* cmd) {
    bind_config("min_degree", cmd->add_option("--min-degree", o.min_degree, "Keep nodes with in- or out-degree > N"), o.min_degree);
    bind_config("drop_retweets", cmd->add_flag("--drop-retweets", o.drop_retweets, "Remove retweet nodes first"), o.drop_retweets);
    bind_config("drop_isolated", cmd->add_flag("--drop-isolated", o.drop_isolated, "Remove nodes left without edges"), o.drop_isolated);
  };
  auto gexf_opts = [&](CLI::App* cmd) {
    bind_config("dynamic", cmd->add_flag("--dynamic", o.dynamic, "Emit first-seen start times"), o.dynamic);
    bind_config("labels", cmd->add_option("--labels", o.labels, "Tweet node labels")->check(CLI::IsMember({"text", "id"})), o.labels);
  };
  auto layout_opts = [&](CLI::App* cmd) {
    bind_config("iterations", cmd->add_option("--iterations", o.iterations, "Layout iterations")->check(CLI::NonNegativeNumber), o.iterations);
    bind_config("seed", cmd->add_option("--seed", o.seed, "Layout seed"), o.seed);
  };
  auto workers_opt = [&](CLI::App* cmd) {
    bind_config("workers", cmd->add_option("--workers", o.workers, "Betweenness worker threads")->check(CLI::PositiveNumber), o.workers);
  };
  auto shards_opt = [&](CLI::App* cmd) {
    bind_config("shards", cmd->add_option("--shards", o.shards, "Shard count for a new store")->check(CLI::PositiveNumber), o.shards);
  };
  auto input_opt = [&](CLI::App* cmd, const char* help) { bind_config("input", cmd->add_option("--input", o.input, help), o.input); };

  auto* ingest = app.add_subcommand("ingest", "Filter a JSON-lines stream by topic and store it");
  store_opt(ingest), topic_opt(ingest), keywords_opt(ingest), shards_opt(ingest);
  input_opt(ingest, "JSON-lines file or tcp://HOST:PORT");
  bind_config("speed", ingest->add_option("--speed", o.speed, "Replay speed multiplier (0 = unpaced)")->check(CLI::NonNegativeNumber), o.speed);

  auto* bucket = app.add_subcommand("bucket", "Write the activity signature CSV");
  store_opt(bucket), topic_opt(bucket), out_opt(bucket, "Output CSV ('-' = stdout)");
  bind_config("bucket_hours", bucket->add_option("--bucket-hours", o.bucket_hours, "Bucket width in hours")->check(CLI::PositiveNumber), o.bucket_hours);

  auto* build = app.add_subcommand("build", "Build the interaction network as GEXF");
  store_opt(build), topic_opt(build), bucket_opts(build), gexf_opts(build), out_opt(build, "Output GEXF ('-' = stdout)");

  auto* filter = app.add_subcommand("filter", "Apply the degree filter to a GEXF graph");
  bind_config("in", filter->add_option("--in", o.in_gexf, "Input GEXF"), o.in_gexf);
  filter_opts(filter), gexf_opts(filter), out_opt(filter, "Output GEXF ('-' = stdout)");

  auto* metrics = app.add_subcommand("metrics", "Centrality CSV for a GEXF graph");
  bind_config("in", metrics->add_option("--in", o.in_gexf, "Input GEXF"), o.in_gexf);
  workers_opt(metrics), out_opt(metrics, "Output CSV ('-' = stdout)");

  auto* layout = app.add_subcommand("layout", "Centrality CSV with force-layout x,y columns");
  bind_config("in", layout->add_option("--in", o.in_gexf, "Input GEXF"), o.in_gexf);
  layout_opts(layout), workers_opt(layout), out_opt(layout, "Output CSV ('-' = stdout)");
  bind_config("gexf_out", layout->add_option("--gexf-out", o.gexf_out, "Also write GEXF with positions"), o.gexf_out);

  auto* exportc = app.add_subcommand("export", "Export a topic as GEXF or signature CSV");
  store_opt(exportc), topic_opt(exportc), bucket_opts(exportc), filter_opts(exportc), gexf_opts(exportc);
  bind_config("format", exportc->add_option("--format", o.format, "gexf or csv")->check(CLI::IsMember({"gexf", "csv"})), o.format);
  out_opt(exportc, "Output path ('-' = stdout)");

  auto* pipeline = app.add_subcommand("pipeline", "Run the whole funnel into an artifact directory");
  store_opt(pipeline), topic_opt(pipeline), keywords_opt(pipeline), shards_opt(pipeline);
  input_opt(pipeline, "JSON-lines file or tcp://HOST:PORT");
  bind_config("bucket_hours", pipeline->add_option("--bucket-hours", o.bucket_hours, "Bucket width in hours")->check(CLI::PositiveNumber), o.bucket_hours);
  filter_opts(pipeline), gexf_opts(pipeline), layout_opts(pipeline), workers_opt(pipeline);
  out_opt(pipeline, "Artifact directory");

  auto* serve = app.add_subcommand("serve", "Serve a JSON-lines file as a loopback mock stream");
  input_opt(serve, "JSON-lines file");
  bind_config("port", serve->add_option("--port", o.port, "Port on 127.0.0.1 (0 = ephemeral)"), o.port);
  bind_config("clients", serve->add_option("--clients", o.clients, "Clients to serve before exiting (0 = forever)"), o.clients);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (!o.config_path.empty()) apply_config(o.config_path);
    auto require = [](const std::string& value, const char* flag) {
      if (value.empty()) throw tf::Error(tf::Errc::InvalidArgument, std::string(flag) + " is required");
    };

    if (*ingest) {
      require(o.store, "--store"), require(o.input, "--input");
      const tf::IngestSummary s = tf::cmd_ingest(pipeline_config(o), o.input, o.speed);
      std::cout << summary_json(s).dump() << '\n';
    } else if (*bucket) {
      require(o.store, "--store"), require(o.topic, "--topic");
      const tf::ShardStore store = open_existing(o);
      emit(o.out, tf::write_signature_csv(tf::bucket_by_time(store, o.topic, bucket_width(o))));
    } else if (*build) {
      require(o.store, "--store"), require(o.topic, "--topic");
      const tf::ShardStore store = open_existing(o);
      emit(o.out, tf::write_gexf(tf::build_graph(store, o.topic, bucket_range(o)), nullptr, gexf_options(o)));
    } else if (*filter) {
      require(o.in_gexf, "--in");
      const tf::FilterSpec spec{o.min_degree, o.drop_retweets, o.drop_isolated};
      emit(o.out, tf::write_gexf(tf::filter_by_degree(load_gexf(o.in_gexf), spec), nullptr, gexf_options(o)));
    } else if (*metrics) {
      require(o.in_gexf, "--in");
      const tf::MultimodalGraph g = load_gexf(o.in_gexf);
      emit(o.out, tf::write_metrics_csv(g, tf::compute_centrality(g, o.workers)));
    } else if (*layout) {
      require(o.in_gexf, "--in");
      const tf::MultimodalGraph g = load_gexf(o.in_gexf);
      const tf::LayoutResult lr = tf::layout_force(g, o.iterations, o.seed);
      emit(o.out, tf::write_metrics_csv(g, tf::compute_centrality(g, o.workers), &lr));
      if (!o.gexf_out.empty()) tf::write_file(o.gexf_out, tf::write_gexf(g, &lr));
    } else if (*exportc) {
      require(o.store, "--store"), require(o.topic, "--topic");
      const tf::ShardStore store = open_existing(o);
      if (o.format == "csv") {
        emit(o.out, tf::write_signature_csv(tf::bucket_by_time(store, o.topic, bucket_width(o))));
      } else {
        const tf::FilterSpec spec{o.min_degree, o.drop_retweets, o.drop_isolated};
        const auto graph = tf::filter_by_degree(tf::build_graph(store, o.topic, bucket_range(o)), spec);
        emit(o.out, tf::write_gexf(graph, nullptr, gexf_options(o)));
      }
    } else if (*pipeline) {
      require(o.store, "--store"), require(o.input, "--input");
      if (o.out == "-") throw tf::Error(tf::Errc::InvalidArgument, "--out DIR is required");
      const tf::PipelineResult r = tf::cmd_pipeline(pipeline_config(o), o.input, o.out);
      json summary = summary_json(r.ingest);
      summary["buckets"] = r.series.buckets.size();
      summary["gexf_files"] = r.gexf_files.size();
      summary["failed_buckets"] = r.failed_buckets;
      std::cout << summary.dump() << '\n';
      if (r.failed_buckets > 0) return kPartial;
    } else if (*serve) {
      require(o.input, "--input");
      tf::LoopbackServer server(tf::read_file(o.input), o.port, o.clients);
      std::cout << "tcp://127.0.0.1:" << server.port() << std::endl;
      server.wait();
    }
  } catch (const tf::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_code_for(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  }
  return kOk;
}
