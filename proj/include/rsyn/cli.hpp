#pragma once

#include "rsyn/runtime.hpp"
#include "rsyn/specfile.hpp"

#include "json.hpp"

#include <map>
#include <memory>
#include <mutex>
#include <string>

namespace rsyn {

// Play script, one command per line:
//   move {x1, x2}            env X-part for the next round
//   exercise right
//   exercise further-right
//   inject NAME              a further block of the spec file
//   fallback random SEED     env policy once the moves run out
//   fallback first
// Events fire at the round given by the number of moves before them.
struct PlayScript {
    std::vector<Letter> moves;
    std::vector<ScheduledEvent> events;
    enum Fallback { None, Random, First } fallback = None;
    std::uint64_t seed = 0;

    std::unique_ptr<EnvPolicy> policy() const;
};

PlayScript parse_script(const std::string& text, const SpecFile& spec);

nlohmann::json session_view(const Session& s);

// The session wire protocol, independent of the HTTP transport. Every body
// carries "v": 1. Status codes: 200/201 ok, 400 malformed request, 404
// unknown session, 409 closed session or repeated commitment, 422 illegal
// env move or env specification without a strategy.
class SessionService {
public:
    struct Response {
        int status = 200;
        nlohmann::json body;
    };

    Response handle(const std::string& method, const std::string& path, const std::string& body);

private:
    struct Entry {
        Entry(SpecFile s, std::shared_ptr<const SynthesisResult> r) : spec(std::move(s)), session(std::move(r)) {}
        std::mutex mutex;
        SpecFile spec;
        Session session;
    };
    std::shared_ptr<Entry> find(const std::string& id);

    std::mutex mutex_;
    std::map<std::string, std::shared_ptr<Entry>> sessions_;
    unsigned long next_id_ = 1;
};

// HTTP binding of a SessionService.
class HttpServer {
public:
    explicit HttpServer(SessionService& service);
    ~HttpServer();

    // Returns the bound port; port 0 picks a free one. Throws Error.
    int bind(const std::string& host, int port);
    // Blocks until stop() is called from another thread.
    void listen();
    void stop();

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

} // namespace rsyn
