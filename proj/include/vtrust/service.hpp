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

#pragma once

#include <memory>
#include <optional>
#include <string>

#include "json.hpp"
#include "vtrust/error.hpp"
#include "vtrust/dataset.hpp"
#include "vtrust/snapshot.hpp"

namespace vtrust {

/// What the service serves: a dataset and the snapshot computed from it.
/// Never mutated after construction; recompute swaps in a new instance.
struct ServiceState {
  Dataset dataset;
  Snapshot snapshot;
};

/// What-if assessment of one system against a snapshot. The body is either a
/// system spec or {"system": spec}, plus the optional keys
///   "params"            overrides; component opinions are recomputed
///   "unknown_as_clean"  atoms without any record are assessed as clean
///   "sources"           {component: [{"t","c","f","weight"}...]} fused in
/// Returns the system payload (plus "fusion_log" when sources were given).
nlohmann::json handle_assess_request(const ServiceState& state, const nlohmann::json& body);

/// {"a": request, "b": request, "actual_a"?, "actual_b"?, "params"?} where
/// each request is what handle_assess_request takes.
nlohmann::json handle_compare_request(const ServiceState& state, const nlohmann::json& body);

/// Maps an error to the HTTP status the API uses for it.
int http_status_for(const Error& error);

class Server {
 public:
  /// Serves `state`. Recompute needs `data_dir`; without it the endpoint
  /// answers 409.
  Server(ServiceState state, std::optional<DataDir> data_dir = std::nullopt);
  /// Loads the dataset and the current snapshot of `data_dir`.
  static std::unique_ptr<Server> from_data_dir(const DataDir& data_dir);
  ~Server();

  Server(const Server&) = delete;
  Server& operator=(const Server&) = delete;

  /// Binds the listening socket; port 0 picks a free port. Returns the port.
  int bind(const std::string& host, int port);
  /// Serves on the calling thread until stop().
  void run();
  /// Serves on a background thread.
  void start();
  void stop();
  int port() const;

  std::shared_ptr<const ServiceState> state() const;
  /// Rebuilds the snapshot from the data directory and persists it as the
  /// current one. Throws Error(Busy) while another recompute runs.
  nlohmann::json recompute(const nlohmann::json& body);

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace vtrust
