#pragma once

#include <atomic>
#include <cstdint>
#include <iosfwd>
#include <memory>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "influence/server/session.hpp"

namespace influence {

struct ServerOptions {
  unsigned short port = 8765;
  std::string log_dir = "sessions";
  int timesteps = 0;  // 0 uses the scenario default
  int interactions = 30;
  double tick_ms = 100.0;
  double planner_ms = 80.0;
};

// Accepts WebSocket clients (detected by an HTTP "GET " preamble) and raw TCP
// clients speaking "<byte length>\n<json>" records on the same port.
class Server {
 public:
  explicit Server(ServerOptions opts);
  ~Server();
  Server(const Server&) = delete;
  Server& operator=(const Server&) = delete;

  // Binds and starts accepting; returns the bound port.
  unsigned short start();
  void stop();
  void wait();  // blocks until stop()

  struct Impl;

 private:
  std::unique_ptr<Impl> impl_;
};

struct HeadlessScript {
  std::string scenario = "highway";
  std::string algorithm = "unified";
  std::uint64_t seed = 1;
  int interactions = 30;
  bool websocket = false;
  std::vector<InputMessage> inputs;  // cycled, one per tick
};

HeadlessScript load_headless_script(const std::string& path);

struct HeadlessResult {
  bool ok = false;
  std::string error;
  std::string session;
  std::uint64_t frames = 0;
  int interactions = 0;
  int rows = 0;
  int held_inputs = 0;
  int overruns = 0;  // frames later than one tick past their schedule
  double max_late_ms = 0.0;
  double max_step_ms = 0.0;
  double final_score = 0.0;
  std::string log_path;
  std::vector<FrameMessage> frame_log;
};

// Connects to a running server and plays the script in real time.
HeadlessResult run_headless_client(const std::string& host, unsigned short port,
                                   const HeadlessScript& script);

// Starts an in-process server on an ephemeral port and drives one session.
HeadlessResult headless_session(ServerOptions opts, const HeadlessScript& script);

int run_server(const ServerOptions& opts);
int run_headless(ServerOptions opts, const std::string& script_path, std::ostream& out);

}  // namespace influence
