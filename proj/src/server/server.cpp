#include "influence/server/server.hpp"

#include <sys/socket.h>

#include <boost/asio.hpp>
#include <boost/beast/core.hpp>
#include <boost/beast/websocket.hpp>

#include <chrono>
#include <condition_variable>
#include <csignal>
#include <fstream>
#include <iostream>
#include <optional>

#include "influence/core/errors.hpp"

namespace influence {

namespace asio = boost::asio;
namespace beast = boost::beast;
namespace websocket = boost::beast::websocket;
using tcp = asio::ip::tcp;
using nlohmann::json;
using Clock = std::chrono::steady_clock;

namespace {

constexpr std::size_t kMaxMessageBytes = 1 << 20;

class Channel {
 public:
  virtual ~Channel() = default;
  // False on end of stream or error.
  virtual bool read(std::string& out) = 0;
  virtual bool write(const std::string& msg) = 0;
  // Safe to call from another thread; unblocks a pending read.
  virtual void shutdown() = 0;
};

void shutdown_native(int fd) {
  if (fd >= 0) ::shutdown(fd, SHUT_RDWR);
}

class RawChannel final : public Channel {
 public:
  explicit RawChannel(tcp::socket sock) : sock_(std::move(sock)), fd_(sock_.native_handle()) {}

  bool read(std::string& out) override {
    boost::system::error_code ec;
    asio::read_until(sock_, buf_, '\n', ec);
    if (ec) return false;
    std::istream is(&buf_);
    std::string header;
    std::getline(is, header);
    std::size_t len = 0;
    try {
      len = std::stoul(header);
    } catch (const std::exception&) {
      return false;
    }
    if (len > kMaxMessageBytes) return false;
    if (buf_.size() < len) asio::read(sock_, buf_, asio::transfer_exactly(len - buf_.size()), ec);
    if (ec) return false;
    out.assign(len, '\0');
    is.read(out.data(), static_cast<std::streamsize>(len));
    return true;
  }

  bool write(const std::string& msg) override {
    boost::system::error_code ec;
    const std::string record = std::to_string(msg.size()) + "\n" + msg;
    asio::write(sock_, asio::buffer(record), ec);
    return !ec;
  }

  void shutdown() override { shutdown_native(fd_); }

 private:
  tcp::socket sock_;
  int fd_;
  asio::streambuf buf_;
};

class WsChannel final : public Channel {
 public:
  explicit WsChannel(websocket::stream<tcp::socket> ws)
      : ws_(std::move(ws)), fd_(beast::get_lowest_layer(ws_).native_handle()) {
    ws_.text(true);
  }

  bool read(std::string& out) override {
    beast::flat_buffer b;
    boost::system::error_code ec;
    ws_.read(b, ec);
    if (ec) return false;
    out = beast::buffers_to_string(b.data());
    return true;
  }

  bool write(const std::string& msg) override {
    boost::system::error_code ec;
    ws_.write(asio::buffer(msg), ec);
    return !ec;
  }

  void shutdown() override { shutdown_native(fd_); }

 private:
  websocket::stream<tcp::socket> ws_;
  int fd_;
};

json error_message(const std::string& message) {
  return {{"schema", kSessionSchema}, {"type", "error"}, {"message", message}};
}

}  // namespace

struct Connection {
  Connection(Server::Impl& s, std::unique_ptr<Channel> c) : server(s), channel(std::move(c)) {}
  ~Connection() {
    stop_ticker();
    if (thread.joinable()) thread.join();
  }
  Connection(const Connection&) = delete;
  Connection& operator=(const Connection&) = delete;

  void run();
  void handle(const json& msg);
  void open(const json& msg);
  void close_session();
  void tick_loop();
  void stop_ticker() {
    ticking = false;
    if (ticker.joinable()) ticker.join();
  }
  bool send(const json& msg) {
    std::lock_guard<std::mutex> lock(write_mu);
    return channel->write(msg.dump());
  }

  Server::Impl& server;
  std::unique_ptr<Channel> channel;
  std::thread thread;
  std::mutex write_mu;

  std::unique_ptr<Session> session;
  std::thread ticker;
  std::atomic<bool> ticking{false};
  std::mutex input_mu;
  std::optional<InputMessage> pending;
  int overruns = 0;
  double max_late_ms = 0.0;
};

struct Server::Impl {
  explicit Impl(ServerOptions o) : opts(std::move(o)), acceptor(ioc) {}

  ServerOptions opts;
  asio::io_context ioc;
  tcp::acceptor acceptor;
  std::thread accept_thread;
  std::mutex mu;
  std::condition_variable stopped_cv;
  std::vector<std::shared_ptr<Connection>> connections;
  std::atomic<bool> stopping{false};
  std::atomic<std::uint64_t> session_counter{0};

  void accept_loop();
};

void Server::Impl::accept_loop() {
  while (!stopping) {
    tcp::socket sock(ioc);
    boost::system::error_code ec;
    acceptor.accept(sock, ec);
    if (stopping) break;
    if (ec) continue;
    sock.set_option(tcp::no_delay(true), ec);

    // Sniff the first bytes: an HTTP upgrade request means WebSocket.
    char peek[4] = {0, 0, 0, 0};
    std::size_t got = 0;
    while (got < 4) {
      got = sock.receive(asio::buffer(peek, 4), tcp::socket::message_peek, ec);
      if (ec || got == 0) break;
      if (got < 4 && std::string_view(peek, got) != std::string_view("GET ", got)) break;
      if (got < 4) std::this_thread::sleep_for(std::chrono::milliseconds(1));
    }
    if (ec) continue;

    std::unique_ptr<Channel> channel;
    if (got == 4 && std::string_view(peek, 4) == "GET ") {
      websocket::stream<tcp::socket> ws(std::move(sock));
      ws.accept(ec);
      if (ec) continue;
      channel = std::make_unique<WsChannel>(std::move(ws));
    } else {
      channel = std::make_unique<RawChannel>(std::move(sock));
    }
    auto conn = std::make_shared<Connection>(*this, std::move(channel));
    {
      std::lock_guard<std::mutex> lock(mu);
      connections.push_back(conn);
    }
    Connection* raw = conn.get();
    raw->thread = std::thread([raw] { raw->run(); });
  }
}

void Connection::run() {
  std::string text;
  while (channel->read(text)) {
    json msg;
    try {
      msg = json::parse(text);
    } catch (const json::exception& e) {
      send(error_message(std::string("malformed JSON: ") + e.what()));
      continue;
    }
    try {
      handle(msg);
    } catch (const std::exception& e) {
      send(error_message(e.what()));
    }
    if (msg.value("type", "") == "close") break;
  }
  stop_ticker();
  if (session && session->phase() != SessionPhase::kClosed) {
    try {
      session->close(server.opts.log_dir);
    } catch (const std::exception& e) {
      std::cerr << "session " << session->id() << ": " << e.what() << "\n";
    }
  }
  channel->shutdown();
}

void Connection::handle(const json& msg) {
  if (!msg.is_object() || msg.value("schema", "") != kSessionSchema) {
    throw ConfigurationError(std::string("messages must carry schema '") + kSessionSchema + "'");
  }
  const std::string type = msg.value("type", "");
  if (type == "open") {
    open(msg);
  } else if (type == "input") {
    const InputMessage in = input_from_json(msg);
    std::lock_guard<std::mutex> lock(input_mu);
    pending = in;
  } else if (type == "close") {
    close_session();
  } else {
    throw ConfigurationError("unknown message type '" + type + "'");
  }
}

void Connection::open(const json& msg) {
  if (session) throw ConfigurationError("a session is already open on this connection");
  const std::string scenario = msg.value("scenario", "");
  const std::string algorithm = msg.value("algorithm", "");
  const std::uint64_t seed = msg.value("seed", std::uint64_t{1});
  SessionOptions so;
  so.timesteps = server.opts.timesteps;
  so.interactions = std::clamp(msg.value("interactions", server.opts.interactions), 1, 1000);
  so.planner_ms = server.opts.planner_ms;
  const std::string id = "session-" + std::to_string(seed) + "-" +
                         std::to_string(server.session_counter.fetch_add(1));
  session = std::make_unique<Session>(id, scenario, algorithm, seed, so);
  send({{"schema", kSessionSchema},
        {"type", "opened"},
        {"session", id},
        {"phase", phase_name(session->phase())},
        {"frame", to_json(session->frame())}});
  ticking = true;
  ticker = std::thread([this] { tick_loop(); });
}

void Connection::tick_loop() {
  const auto period = std::chrono::duration<double, std::milli>(server.opts.tick_ms);
  const auto start = Clock::now();
  for (std::uint64_t k = 1; ticking; ++k) {
    const auto scheduled =
        start + std::chrono::duration_cast<Clock::duration>(period * static_cast<double>(k));
    std::this_thread::sleep_until(scheduled);
    if (!ticking) break;
    std::optional<InputMessage> in;
    {
      std::lock_guard<std::mutex> lock(input_mu);
      in = pending;
      pending.reset();
    }
    FrameMessage f;
    try {
      f = session->tick(in);
    } catch (const std::exception& e) {
      send(error_message(std::string("tick failed: ") + e.what()));
      break;
    }
    const double late_ms = std::chrono::duration<double, std::milli>(Clock::now() - scheduled).count();
    if (late_ms > server.opts.tick_ms) ++overruns;
    max_late_ms = std::max(max_late_ms, late_ms);
    json j = to_json(f);
    j["late_ms"] = late_ms;
    if (!send(j) || f.finished) break;
  }
}

void Connection::close_session() {
  stop_ticker();
  if (!session) {
    send({{"schema", kSessionSchema}, {"type", "closed"}, {"session", ""}, {"rows", 0}});
    return;
  }
  const std::string path = session->close(server.opts.log_dir);
  send({{"schema", kSessionSchema},
        {"type", "closed"},
        {"session", session->id()},
        {"log", path},
        {"rows", session->rows().size()},
        {"ticks", session->tick_count()},
        {"score", session->score()},
        {"overruns", overruns},
        {"max_late_ms", max_late_ms}});
}

Server::Server(ServerOptions opts) : impl_(std::make_unique<Impl>(std::move(opts))) {}

Server::~Server() { stop(); }

unsigned short Server::start() {
  tcp::endpoint ep(asio::ip::address_v4::loopback(), impl_->opts.port);
  impl_->acceptor.open(ep.protocol());
  impl_->acceptor.set_option(tcp::acceptor::reuse_address(true));
  impl_->acceptor.bind(ep);
  impl_->acceptor.listen();
  const unsigned short port = impl_->acceptor.local_endpoint().port();
  impl_->accept_thread = std::thread([this] { impl_->accept_loop(); });
  return port;
}

void Server::stop() {
  if (!impl_ || impl_->stopping.exchange(true)) return;
  shutdown_native(impl_->acceptor.native_handle());
  boost::system::error_code ec;
  impl_->acceptor.cancel(ec);
  if (impl_->accept_thread.joinable()) impl_->accept_thread.join();
  impl_->acceptor.close(ec);
  std::vector<std::shared_ptr<Connection>> conns;
  {
    std::lock_guard<std::mutex> lock(impl_->mu);
    conns.swap(impl_->connections);
  }
  for (auto& c : conns) {
    c->ticking = false;
    c->channel->shutdown();
  }
  conns.clear();  // joins each connection thread
  impl_->stopped_cv.notify_all();
}

void Server::wait() {
  std::unique_lock<std::mutex> lock(impl_->mu);
  impl_->stopped_cv.wait(lock, [this] { return impl_->stopping.load(); });
}

HeadlessScript load_headless_script(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigurationError("cannot open headless script '" + path + "'");
  try {
    json j;
    in >> j;
    HeadlessScript s;
    s.scenario = j.value("scenario", s.scenario);
    s.algorithm = j.value("algorithm", s.algorithm);
    s.seed = j.value("seed", s.seed);
    s.interactions = j.value("interactions", s.interactions);
    s.websocket = j.value("websocket", s.websocket);
    for (const auto& row : j.at("inputs")) {
      InputMessage m;
      m.steering = std::clamp(row.at(0).get<double>(), -1.0, 1.0);
      m.accel = std::clamp(row.at(1).get<double>(), -1.0, 1.0);
      s.inputs.push_back(m);
    }
    if (s.inputs.empty()) throw ConfigurationError("headless script has no inputs");
    return s;
  } catch (const json::exception& e) {
    throw ConfigurationError("malformed headless script '" + path + "': " + e.what());
  }
}

namespace {

std::unique_ptr<Channel> connect_channel(const std::string& host, unsigned short port,
                                         bool use_websocket, asio::io_context& ioc) {
  tcp::resolver resolver(ioc);
  const auto endpoints = resolver.resolve(host, std::to_string(port));
  tcp::socket sock(ioc);
  asio::connect(sock, endpoints);
  sock.set_option(tcp::no_delay(true));
  if (!use_websocket) return std::make_unique<RawChannel>(std::move(sock));
  websocket::stream<tcp::socket> ws(std::move(sock));
  ws.handshake(host, "/");
  return std::make_unique<WsChannel>(std::move(ws));
}

}  // namespace

HeadlessResult run_headless_client(const std::string& host, unsigned short port,
                                   const HeadlessScript& script) {
  HeadlessResult r;
  try {
    if (script.inputs.empty()) throw ConfigurationError("headless script has no inputs");
    asio::io_context ioc;
    auto ch = connect_channel(host, port, script.websocket, ioc);
    const json open = {{"schema", kSessionSchema},
                       {"type", "open"},
                       {"scenario", script.scenario},
                       {"algorithm", script.algorithm},
                       {"seed", script.seed},
                       {"interactions", script.interactions}};
    ch->write(open.dump());
    bool close_sent = false;
    auto respond = [&](const FrameMessage& f) {
      if (close_sent) return;
      if (f.finished || f.interaction >= script.interactions) {
        ch->write(json({{"schema", kSessionSchema}, {"type", "close"}}).dump());
        close_sent = true;
        return;
      }
      InputMessage in = script.inputs[f.tick % script.inputs.size()];
      in.tick = f.tick;
      ch->write(to_json(in).dump());
    };
    std::string text;
    while (ch->read(text)) {
      const json msg = json::parse(text);
      const std::string type = msg.value("type", "");
      if (type == "error") throw std::runtime_error("server error: " + msg.value("message", ""));
      if (type == "opened") {
        r.session = msg.at("session").get<std::string>();
        const FrameMessage f = frame_from_json(msg.at("frame"));
        r.frame_log.push_back(f);
        respond(f);
      } else if (type == "frame") {
        const FrameMessage f = frame_from_json(msg);
        ++r.frames;
        if (f.held_input) ++r.held_inputs;
        r.max_step_ms = std::max(r.max_step_ms, f.step_ms);
        r.interactions = f.interaction;
        r.final_score = f.score;
        r.frame_log.push_back(f);
        respond(f);
      } else if (type == "closed") {
        r.log_path = msg.value("log", "");
        r.rows = msg.value("rows", 0);
        r.overruns = msg.value("overruns", 0);
        r.max_late_ms = msg.value("max_late_ms", 0.0);
        r.ok = true;
        break;
      }
    }
    ch->shutdown();
    if (!r.ok && r.error.empty()) r.error = "connection closed before the session was closed";
  } catch (const std::exception& e) {
    r.ok = false;
    r.error = e.what();
  }
  return r;
}

HeadlessResult headless_session(ServerOptions opts, const HeadlessScript& script) {
  opts.port = 0;
  Server server(opts);
  const unsigned short port = server.start();
  HeadlessResult r = run_headless_client("127.0.0.1", port, script);
  server.stop();
  return r;
}

namespace {

std::atomic<bool> g_interrupted{false};

void on_signal(int) { g_interrupted = true; }

}  // namespace

int run_server(const ServerOptions& opts) {
  Server server(opts);
  const unsigned short port = server.start();
  std::cout << "listening on 127.0.0.1:" << port << " (WebSocket or length-delimited TCP)"
            << std::endl;
  std::signal(SIGINT, on_signal);
  std::signal(SIGTERM, on_signal);
  while (!g_interrupted) std::this_thread::sleep_for(std::chrono::milliseconds(200));
  server.stop();
  return 0;
}

int run_headless(ServerOptions opts, const std::string& script_path, std::ostream& out) {
  const HeadlessScript script = load_headless_script(script_path);
  const HeadlessResult r = headless_session(opts, script);
  out << json({{"ok", r.ok},
               {"error", r.error},
               {"session", r.session},
               {"frames", r.frames},
               {"interactions", r.interactions},
               {"rows", r.rows},
               {"held_inputs", r.held_inputs},
               {"overruns", r.overruns},
               {"max_late_ms", r.max_late_ms},
               {"max_step_ms", r.max_step_ms},
               {"score", r.final_score},
               {"log", r.log_path}})
             .dump()
      << "\n";
  return r.ok && r.overruns == 0 && r.rows == script.interactions ? 0 : 1;
}

}  // namespace influence
