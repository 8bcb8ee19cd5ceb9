#include "fresco/tools/service.hpp"

#include <charconv>

#include <httplib.h>

#include "fresco/error.hpp"
#include "fresco/format.hpp"
#include "fresco/measure_ids.hpp"

namespace fresco::tools {

namespace {

using ojson = nlohmann::ordered_json;

constexpr const char* kJson = "application/json";

void send(httplib::Response& res, int status, const ojson& body) {
  res.status = status;
  res.set_header("Access-Control-Allow-Origin", "*");
  res.set_content(body.dump(), kJson);
}

void fail(httplib::Response& res, int status, std::string_view code, const std::string& subject,
          const std::string& message) {
  send(res, status, {{"error", {{"code", code}, {"subject", subject}, {"message", message}}}});
}

int status_for(Errc code) {
  switch (code) {
    case Errc::UnknownImage:
    case Errc::UnknownMeasure: return 404;
    default: return 400;
  }
}

// Request-level problem that is not an engine Error.
struct BadRequest {
  std::string subject;
  std::string message;
};

template <typename Fn>
void guarded(httplib::Response& res, Fn&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    fail(res, status_for(e.code()), to_string(e.code()), e.subject(), e.what());
  } catch (const BadRequest& e) {
    fail(res, 400, "BadRequest", e.subject, e.message);
  } catch (const nlohmann::json::exception& e) {
    fail(res, 400, "BadRequest", "body", e.what());
  }
}

double number_param(const httplib::Request& req, const char* name, double fallback) {
  if (!req.has_param(name)) return fallback;
  const std::string s = req.get_param_value(name);
  double v = 0.0;
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size()) throw BadRequest{name, "not a number: " + s};
  return v;
}

std::size_t count_param(const httplib::Request& req, const char* name, std::size_t fallback) {
  if (!req.has_param(name)) return fallback;
  const std::string s = req.get_param_value(name);
  std::size_t v = 0;
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size()) throw BadRequest{name, "not a non-negative integer: " + s};
  return v;
}

std::string string_param(const httplib::Request& req, const char* name) {
  if (!req.has_param(name)) throw BadRequest{name, "missing parameter"};
  return req.get_param_value(name);
}

ojson headline(const ImageRecord& r, const TraitVector& t) {
  ojson h;
  std::size_t faces = 0, objects = 0;
  for (const InstanceAnnotation& inst : r.instances) (inst.is_face() ? faces : objects)++;
  h["faces"] = faces;
  h["objects"] = objects;
  auto categorical = [&](std::string_view id) -> ojson {
    const MeasureValue* v = t.find(id);
    return v ? ojson(std::get<Categorical>(*v).value) : ojson();
  };
  auto number = [&](std::string_view id) -> ojson {
    const MeasureValue* v = t.find(id);
    return v ? ojson(round_to(std::get<double>(*v), 10)) : ojson();
  };
  h["people"] = number(measure::kPeopleCount);
  h["group"] = categorical(measure::kGroupSize);
  h["framing"] = categorical(measure::kFraming);
  h["brightness"] = number(measure::kBrightness);
  h["medium"] = categorical(measure::kMedium);
  return h;
}

WeightConfig weights_from_body(const nlohmann::json& w, const WeightConfig& defaults) {
  WeightConfig out = defaults;
  if (w.is_array()) {
    if (w.size() != 3) throw BadRequest{"weights", "expected [alpha, beta, gamma]"};
    out.alpha = w[0].get<double>();
    out.beta = w[1].get<double>();
    out.gamma = w[2].get<double>();
  } else if (w.is_object()) {
    out.alpha = w.value("alpha", 0.0);
    out.beta = w.value("beta", 0.0);
    out.gamma = w.value("gamma", 0.0);
    if (w.contains("node_weights")) out.node_weights = w["node_weights"].get<std::map<std::string, double>>();
  } else {
    throw BadRequest{"weights", "expected an object or an array"};
  }
  return out;
}

}  // namespace

Service::Service(const Archive& archive, EngineConfig config)
    : archive_(archive), config_(std::move(config)), server_(std::make_unique<httplib::Server>()) {
  routes();
}

Service::~Service() = default;

void Service::routes() {
  httplib::Server& s = *server_;

  s.Get("/images", [this](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] {
      const std::size_t offset = count_param(req, "offset", 0);
      const std::size_t limit = count_param(req, "limit", 50);
      ojson images = ojson::array();
      for (std::size_t i = offset; i < archive_.size() && i < offset + limit; ++i) {
        const ImageRecord& r = archive_.record(i);
        ojson e;
        e["image_id"] = r.image_id;
        e["thumbnail"] = r.thumbnail ? ojson(*r.thumbnail) : ojson();
        e["width"] = r.width;
        e["height"] = r.height;
        e["headline"] = headline(r, archive_.traits(i));
        images.push_back(std::move(e));
      }
      send(res, 200, {{"total", archive_.size()}, {"offset", offset}, {"limit", limit}, {"images", images}});
    });
  });

  s.Get("/images/:id/traits", [this](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] {
      const std::size_t i = archive_.require(req.path_params.at("id"));
      send(res, 200, traits_to_json(archive_.traits(i)));
    });
  });

  s.Get("/score", [this](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] {
      const std::string a = string_param(req, "a");
      const std::string b = string_param(req, "b");
      WeightConfig w = config_.weights;
      w.alpha = number_param(req, "alpha", w.alpha);
      w.beta = number_param(req, "beta", w.beta);
      w.gamma = number_param(req, "gamma", w.gamma);
      const std::size_t ia = archive_.require(a);
      const std::size_t ib = archive_.require(b);
      const ScoreBreakdown bd = fresco_score(archive_.record(ia), archive_.record(ib), archive_.traits(ia),
                                             archive_.traits(ib), w, archive_.registry());
      send(res, 200, breakdown_to_json(bd));
    });
  });

  s.Post("/rank", [this](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] {
      nlohmann::json body;
      try {
        body = nlohmann::json::parse(req.body);
      } catch (const nlohmann::json::parse_error& e) {
        throw BadRequest{"body", e.what()};
      }
      if (!body.is_object()) throw BadRequest{"body", "expected a JSON object"};
      if (!body.contains("reference") || !body["reference"].is_string()) {
        throw BadRequest{"reference", "missing or non-string reference"};
      }
      RankOptions opts;
      if (body.contains("k")) {
        if (!body["k"].is_number_unsigned() || body["k"].get<std::size_t>() == 0) {
          throw BadRequest{"k", "k must be a positive integer"};
        }
        opts.k = body["k"].get<std::size_t>();
      }
      if (body.contains("window")) {
        const auto w = window_from_string(body["window"].get<std::string>());
        if (!w) throw BadRequest{"window", "expected top, median or last"};
        opts.window = *w;
      }
      opts.with_breakdown = body.value("breakdown", false);
      const std::string ref = body["reference"].get<std::string>();
      RankedList list;
      if (body.contains("measure_id") && !body["measure_id"].is_null()) {
        if (body.contains("weights")) throw BadRequest{"body", "give either weights or measure_id"};
        list = rank_by_measure(archive_, ref, body["measure_id"].get<std::string>(), opts,
                               body.value("include_unpaired", true));
      } else {
        const WeightConfig w =
            body.contains("weights") ? weights_from_body(body["weights"], config_.weights) : config_.weights;
        list = rank(archive_, ref, w, opts);
      }
      send(res, 200, ranked_to_json(list));
    });
  });

  s.Get("/measures", [this](const httplib::Request&, httplib::Response& res) {
    guarded(res, [&] { send(res, 200, archive_.registry().to_json()); });
  });

  s.Get("/distributions/:measure", [this](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] {
      const std::size_t bins = count_param(req, "bins", 10);
      send(res, 200, distribution_to_json(distribution(archive_, req.path_params.at("measure"), bins)));
    });
  });

  s.Options(R"(.*)", [](const httplib::Request&, httplib::Response& res) {
    res.set_header("Access-Control-Allow-Origin", "*");
    res.set_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS");
    res.set_header("Access-Control-Allow-Headers", "Content-Type");
    res.status = 204;
  });

  if (!config_.ui_dir.empty()) s.set_mount_point("/", config_.ui_dir);

  s.set_error_handler([](const httplib::Request& req, httplib::Response& res) {
    if (res.status == 404 && res.body.empty()) fail(res, 404, "NotFound", req.path, "no such endpoint");
  });
}

bool Service::listen(const std::string& host, int port) { return server_->listen(host, port); }

int Service::bind_any_port(const std::string& host) { return server_->bind_to_any_port(host); }

bool Service::listen_after_bind() { return server_->listen_after_bind(); }

void Service::stop() { server_->stop(); }

bool Service::running() const { return server_->is_running(); }

}  // namespace fresco::tools
