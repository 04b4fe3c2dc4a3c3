/*
 * Copyright 2026 The vtrust Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "vtrust/service.hpp"

#include <httplib.h>

#include <mutex>
#include <set>
#include <thread>

#include "vtrust/composer.hpp"
#include "vtrust/report.hpp"

namespace vtrust {

using nlohmann::json;

namespace {

struct RequestContext {
  TrustParams params;
  bool params_overridden = false;
};

RequestContext context_for(const ServiceState& state, const json& body, const json* outer) {
  RequestContext ctx{state.snapshot.params, false};
  for (const json* source : {outer, &body}) {
    if (source && source->is_object() && source->contains("params")) {
      ctx.params = params_from_json((*source)["params"], ctx.params);
      ctx.params_overridden = true;
    }
  }
  return ctx;
}

SourceOpinions parse_sources(const json& doc) {
  if (!doc.is_object()) throw Error(ErrorCode::SchemaError, "'sources' must be an object");
  SourceOpinions sources;
  try {
    for (const auto& entry : doc.items()) {
      auto& list = sources[entry.key()];
      for (const auto& item : entry.value()) {
        const Opinion o = make_opinion(item.at("t").get<double>(), item.at("c").get<double>(),
                                       item.at("f").get<double>());
        list.push_back({o, item.value("weight", 1.0)});
      }
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::SchemaError, std::string("invalid source opinion: ") + e.what());
  }
  return sources;
}

json assess_one(const ServiceState& state, const json& body, const json* outer) {
  if (!body.is_object()) throw Error(ErrorCode::SchemaError, "request body must be an object");
  const SystemSpec spec = parse_spec(body.contains("system") ? body["system"] : body);
  const RequestContext ctx = context_for(state, body, outer);

  OpinionMap opinions;
  if (ctx.params_overridden) {
    for (const auto& a :
         assess_components(state.snapshot.predictions, state.dataset, ctx.params).assessments)
      opinions.emplace(a.component, a.opinion);
  } else {
    opinions = state.snapshot.opinions();
  }

  const json flag = body.value("unknown_as_clean", json(false));
  if (!flag.is_boolean()) throw Error(ErrorCode::SchemaError, "'unknown_as_clean' must be a boolean");
  if (flag.get<bool>()) {
    for (const auto& name : unknown_components(spec.formula, opinions))
      if (state.dataset.count_for(name) == 0)
        opinions.emplace(name, assess_clean_component(name, ctx.params).opinion);
  }

  std::vector<std::string> fusion_log;
  if (body.contains("sources"))
    fusion_log = fuse_sources(opinions, parse_sources(body["sources"]));

  json payload = system_payload(assess_system(spec, opinions, ctx.params));
  if (!fusion_log.empty()) payload["fusion_log"] = fusion_log;
  return payload;
}

std::optional<double> optional_count(const json& body, const char* key) {
  if (!body.contains(key) || body[key].is_null()) return std::nullopt;
  if (!body[key].is_number()) throw Error(ErrorCode::SchemaError, std::string("'") + key + "' must be a number");
  return body[key].get<double>();
}

json parse_body(const httplib::Request& req) {
  if (req.body.empty()) return json::object();
  try {
    return json::parse(req.body);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::SchemaError, std::string("body is not JSON: ") + e.what());
  }
}

json component_entry(const ServiceState& state, const std::string& name) {
  json entry{{"component", name},
             {"records", state.dataset.count_for(name)},
             {"assessment", nullptr},
             {"prediction", nullptr}};
  if (const auto it = state.snapshot.assessments.find(name); it != state.snapshot.assessments.end())
    entry["assessment"] = report_entry(it->second);
  for (const auto& p : state.snapshot.predictions)
    if (p.component == name) entry["prediction"] = {{"pred", p.pred}, {"error", p.error_estimate}};
  return entry;
}

std::vector<std::string> known_components(const ServiceState& state) {
  std::set<std::string> names;
  for (const auto& name : state.dataset.components()) names.insert(name);
  for (const auto& entry : state.snapshot.assessments) names.insert(entry.first);
  return {names.begin(), names.end()};
}

}  // namespace

json handle_assess_request(const ServiceState& state, const json& body) {
  return assess_one(state, body, nullptr);
}

json handle_compare_request(const ServiceState& state, const json& body) {
  if (!body.is_object() || !body.contains("a") || !body.contains("b"))
    throw Error(ErrorCode::SchemaError, "compare needs systems 'a' and 'b'");
  json a = assess_one(state, body["a"], &body);
  json b = assess_one(state, body["b"], &body);
  const ComparisonReport report =
      compare_counts(a["equivalent_vulns"].get<double>(), b["equivalent_vulns"].get<double>(),
                     optional_count(body, "actual_a"), optional_count(body, "actual_b"));
  return json{{"a", std::move(a)}, {"b", std::move(b)}, {"comparison", comparison_payload(report)}};
}

int http_status_for(const Error& error) {
  switch (error.code()) {
    case ErrorCode::UnknownComponent:
    case ErrorCode::MissingOpinion:
      return 404;
    case ErrorCode::Busy:
      return 409;
    case ErrorCode::Unsimplifiable:
    case ErrorCode::NotReadOnce:
    case ErrorCode::DivisionByZero:
    case ErrorCode::EmptyHistory:
    case ErrorCode::WindowOutOfRange:
      return 422;
    case ErrorCode::IoError:
      return 500;
    default:
      return 400;
  }
}

struct Server::Impl {
  httplib::Server http;
  std::optional<DataDir> data_dir;
  mutable std::mutex state_mutex;
  std::shared_ptr<const ServiceState> state;
  std::mutex recompute_mutex;
  std::thread worker;
  int port = -1;

  std::shared_ptr<const ServiceState> current() const {
    std::lock_guard lock(state_mutex);
    return state;
  }
};

namespace {

void send_json(httplib::Response& res, int status, const json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

template <typename Fn>
void respond(httplib::Response& res, Fn&& fn) {
  try {
    send_json(res, 200, fn());
  } catch (const Error& e) {
    send_json(res, http_status_for(e), {{"error", to_string(e.code())}, {"message", e.what()}});
  } catch (const std::exception& e) {
    send_json(res, 500, {{"error", "Internal"}, {"message", e.what()}});
  }
}

}  // namespace

Server::Server(ServiceState state, std::optional<DataDir> data_dir)
    : impl_(std::make_unique<Impl>()) {
  impl_->data_dir = std::move(data_dir);
  impl_->state = std::make_shared<const ServiceState>(std::move(state));
  Impl* impl = impl_.get();
  auto& http = impl_->http;

  http.Get("/api/components", [impl](const httplib::Request&, httplib::Response& res) {
    respond(res, [&] {
      const auto state = impl->current();
      json list = json::array();
      for (const auto& name : known_components(*state)) list.push_back(component_entry(*state, name));
      return list;
    });
  });

  http.Get(R"(/api/components/([^/]+))", [impl](const httplib::Request& req, httplib::Response& res) {
    respond(res, [&] {
      const auto state = impl->current();
      const std::string name = req.matches[1];
      if (!state->dataset.has_component(name) && !state->snapshot.assessments.contains(name))
        throw Error(ErrorCode::UnknownComponent, "unknown component '" + name + "'");
      return component_entry(*state, name);
    });
  });

  http.Get(R"(/api/components/([^/]+)/history)",
           [impl](const httplib::Request& req, httplib::Response& res) {
             respond(res, [&] {
               const auto state = impl->current();
               const std::string bins = req.has_param("bins") ? req.get_param_value("bins") : "month";
               if (bins != "month")
                 throw Error(ErrorCode::InvalidArgument, "unsupported bins '" + bins + "'");
               const VulnSeries series = bin_monthly(state->dataset, std::string(req.matches[1]));
               json out = history_json(series);
               out["prediction"] = component_entry(*state, series.component)["prediction"];
               return out;
             });
           });

  http.Get("/api/stats/yearly", [impl](const httplib::Request&, httplib::Response& res) {
    respond(res, [&] {
      const auto state = impl->current();
      json list = json::array();
      for (const auto& [year, count] : yearly_totals(state->dataset))
        list.push_back({{"year", year},
                        {"count", count},
                        {"avg_per_affected", avg_per_affected(state->dataset, year)}});
      return list;
    });
  });

  http.Get("/api/stats/top", [impl](const httplib::Request& req, httplib::Response& res) {
    respond(res, [&] {
      const auto state = impl->current();
      std::size_t n = 20;
      if (req.has_param("n")) {
        const std::string text = req.get_param_value("n");
        try {
          std::size_t used = 0;
          const long value = std::stol(text, &used);
          if (used != text.size() || value < 0) throw std::invalid_argument(text);
          n = static_cast<std::size_t>(value);
        } catch (const std::logic_error&) {
          throw Error(ErrorCode::InvalidArgument, "n must be a non-negative integer");
        }
      }
      std::optional<MonthRange> window;
      if (req.has_param("start") || req.has_param("end")) {
        const MonthRange epoch = state->dataset.epoch();
        window = MonthRange{
            req.has_param("start") ? parse_year_month(req.get_param_value("start")) : epoch.first,
            req.has_param("end") ? parse_year_month(req.get_param_value("end")) : epoch.last};
      }
      json list = json::array();
      for (const auto& r : top_n(state->dataset, n, window))
        list.push_back({{"rank", r.rank}, {"component", r.component}, {"count", r.count}});
      return list;
    });
  });

  http.Post("/api/systems/assess", [impl](const httplib::Request& req, httplib::Response& res) {
    respond(res, [&] { return handle_assess_request(*impl->current(), parse_body(req)); });
  });

  http.Post("/api/systems/compare", [impl](const httplib::Request& req, httplib::Response& res) {
    respond(res, [&] { return handle_compare_request(*impl->current(), parse_body(req)); });
  });

  http.Post("/api/recompute", [this](const httplib::Request& req, httplib::Response& res) {
    respond(res, [&] { return recompute(parse_body(req)); });
  });
}

std::unique_ptr<Server> Server::from_data_dir(const DataDir& data_dir) {
  auto snapshot = data_dir.load_current_snapshot();
  if (!snapshot)
    throw Error(ErrorCode::IoError,
                "no snapshot in " + data_dir.root().string() + " (run assess first)");
  return std::make_unique<Server>(ServiceState{data_dir.load_dataset(), std::move(*snapshot)},
                                  data_dir);
}

Server::~Server() { stop(); }

int Server::bind(const std::string& host, int port) {
  if (port == 0) {
    impl_->port = impl_->http.bind_to_any_port(host);
  } else {
    impl_->port = impl_->http.bind_to_port(host, port) ? port : -1;
  }
  if (impl_->port < 0)
    throw Error(ErrorCode::IoError, "cannot bind " + host + ":" + std::to_string(port));
  return impl_->port;
}

void Server::run() {
  if (impl_->port < 0) throw Error(ErrorCode::InvalidArgument, "server is not bound");
  impl_->http.listen_after_bind();
}

void Server::start() {
  if (impl_->port < 0) throw Error(ErrorCode::InvalidArgument, "server is not bound");
  if (impl_->worker.joinable()) return;
  impl_->worker = std::thread([impl = impl_.get()] { impl->http.listen_after_bind(); });
  impl_->http.wait_until_ready();
}

void Server::stop() {
  impl_->http.stop();
  if (impl_->worker.joinable()) impl_->worker.join();
}

int Server::port() const { return impl_->port; }

std::shared_ptr<const ServiceState> Server::state() const { return impl_->current(); }

json Server::recompute(const json& body) {
  std::unique_lock guard(impl_->recompute_mutex, std::try_to_lock);
  if (!guard.owns_lock()) throw Error(ErrorCode::Busy, "a recompute is already in progress");
  if (!impl_->data_dir) throw Error(ErrorCode::Busy, "recompute needs a data directory");

  const auto previous = impl_->current();
  const TrustParams params =
      params_from_json(body.is_object() ? body.value("params", json()) : json(), previous->snapshot.params);
  Dataset dataset = impl_->data_dir->load_dataset();
  const auto predictions = impl_->data_dir->load_predictions();
  Snapshot snapshot = build_snapshot(dataset, predictions, params);
  impl_->data_dir->save_snapshot(snapshot);

  json summary{{"dataset_fingerprint", snapshot.dataset_fingerprint},
               {"created_at", snapshot.created_at},
               {"components", snapshot.assessments.size()},
               {"warnings", snapshot.warnings}};
  auto next = std::make_shared<const ServiceState>(ServiceState{std::move(dataset), std::move(snapshot)});
  {
    std::lock_guard lock(impl_->state_mutex);
    impl_->state = std::move(next);
  }
  return summary;
}

}  // namespace vtrust
