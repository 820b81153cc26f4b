#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include <json.hpp>

#include "agentclass/errors.hpp"

namespace agentclass {

using Json = nlohmann::json;

// The closed performative vocabulary; protocols only restrict further.
enum class Performative { request, inform, report, approve, feedback };

std::string performative_str(Performative p);
Performative parse_performative(const std::string& text);

struct AgentMessage {
    std::uint64_t id = 0;  // assigned by the runtime, monotone per run
    std::optional<std::uint64_t> correlation_id;  // links a reply to its request
    std::string from;
    std::string to;
    Performative performative = Performative::inform;
    Json payload;
};

struct Belief {
    std::string key;
    Json value;
    std::uint64_t version = 0;  // strictly increasing per key, no gaps
    std::string updated_by;
};

enum class EventKind { percept_arrived, message_arrived, belief_changed, timer };

std::string event_kind_str(EventKind k);

struct Event {
    std::uint64_t id = 0;  // global monotone; dispatch always takes the lowest pending id
    EventKind kind = EventKind::percept_arrived;
    std::string owner;  // agent whose plan library handles the dispatch
    Json payload;       // percept/timer payload; belief_changed carries {key, version, updated_by}
    std::optional<AgentMessage> message;  // message_arrived only
};

class AgentContext;

// A plan is an event predicate plus an ordered, nonempty list of named steps.
// The first plan in the library whose trigger matches handles the event.
struct PlanStep {
    std::string name;
    std::function<void(AgentContext&)> run;
};

struct Plan {
    std::string name;
    std::string goal;
    std::function<bool(const Event&)> trigger;  // must be total: no throwing
    std::vector<PlanStep> steps;
};

// Interaction rules: which (performative, from_role, to_role) transitions may
// be sent, and which performatives demand exactly one correlated reply.
struct Protocol {
    std::string name = "open";
    bool open = true;  // when set, every transition is allowed
    std::set<std::tuple<Performative, std::string, std::string>> allowed;
    std::set<Performative> requires_reply;

    bool permits(Performative p, const std::string& from_role, const std::string& to_role) const;
};

// One line per dispatched event; field order is fixed so traces can be
// compared as golden files.
struct TraceRecord {
    std::size_t step = 0;
    std::string agent;
    EventKind kind = EventKind::percept_arrived;
    std::optional<std::uint64_t> message_id;
    std::optional<std::uint64_t> correlation_id;
    std::vector<std::string> actions;

    bool operator==(const TraceRecord&) const = default;
};

// "step=N agent=X event=kind msg=I corr=C actions=[a;b]", '-' for absent ids.
std::string format_trace_record(const TraceRecord& r);
std::string format_trace(const std::vector<TraceRecord>& trace);

// Scheduler ran out of budget (or the pipeline out of feedback cycles) with
// work still pending. Carries everything dispatched so far. The CLI maps this
// to exit code 3, after writing the partial trace.
class StepLimitExceeded : public std::runtime_error {
public:
    StepLimitExceeded(std::string detail, std::vector<TraceRecord> partial)
        : std::runtime_error("StepLimitExceeded: " + detail),
          detail_(std::move(detail)),
          partial_(std::move(partial)) {}

    const std::string& detail() const noexcept { return detail_; }
    const std::vector<TraceRecord>& partial_trace() const noexcept { return partial_; }
    static const char* name() noexcept { return "StepLimitExceeded"; }

private:
    std::string detail_;
    std::vector<TraceRecord> partial_;
};

struct EventStats {
    std::size_t emitted = 0;
    std::size_t dispatched = 0;
    std::size_t pending = 0;
};

// Deterministic single-threaded agent kernel. Agents own no threads; all
// effects happen inside dispatch, so identical inputs give identical traces.
class Runtime {
public:
    Runtime() = default;
    explicit Runtime(Protocol protocol) : protocol_(std::move(protocol)) {}

    void register_agent(const std::string& name, const std::string& role, std::vector<Plan> plans);
    bool has_agent(const std::string& name) const { return agents_.count(name) != 0; }
    std::optional<std::string> role_of(const std::string& name) const;
    std::size_t roster_size() const { return agents_.size(); }

    // Delivers belief_changed events for keys starting with `prefix` to the
    // agent; subscribers are notified in registration order.
    void subscribe_beliefs(const std::string& agent, const std::string& key_prefix);

    // Protocol-checked send; returns the message id. Queues a message_arrived
    // event for the recipient, so pairwise FIFO follows from id ordering.
    std::uint64_t send(const std::string& from, Performative p, const std::string& to, Json payload,
                       std::optional<std::uint64_t> correlation_id = std::nullopt);

    std::uint64_t inject_percept(const std::string& owner, Json payload);
    std::uint64_t schedule_timer(const std::string& owner, Json payload);

    // Writes the belief store (version = previous + 1, starting at 1), records
    // the write in the history, and notifies subscribers.
    std::uint64_t update_belief(const std::string& agent, const std::string& key, Json value);
    std::optional<Belief> belief(const std::string& key) const;

    // Dispatches lowest-id pending events until quiescent. Throws
    // StepLimitExceeded (carrying the records of this call) if events remain
    // after max_steps dispatches. Returns the records of this call; the
    // cumulative trace stays available via trace().
    std::vector<TraceRecord> run_until_quiescent(std::size_t max_steps);

    const std::vector<TraceRecord>& trace() const { return trace_; }
    const std::vector<AgentMessage>& message_log() const { return message_log_; }
    const std::vector<Belief>& belief_history() const { return belief_history_; }
    const Protocol& protocol() const { return protocol_; }
    EventStats event_stats() const;

private:
    friend class AgentContext;

    struct AgentEntry {
        std::string name;
        std::string role;
        std::vector<Plan> plans;
        std::vector<std::string> belief_prefixes;
        std::size_t order = 0;  // registration order, fixes notification order
    };

    std::uint64_t enqueue(EventKind kind, const std::string& owner, Json payload,
                          std::optional<AgentMessage> message);

    Protocol protocol_;
    std::map<std::string, AgentEntry> agents_;
    std::vector<std::string> registration_order_;
    std::map<std::uint64_t, Event> pending_;  // keyed by event id, so begin() is next
    std::uint64_t next_event_id_ = 1;
    std::uint64_t next_message_id_ = 1;
    std::size_t dispatched_ = 0;
    std::map<std::string, Belief> beliefs_;
    std::vector<Belief> belief_history_;
    std::vector<AgentMessage> message_log_;
    std::vector<TraceRecord> trace_;
};

// Handed to plan steps; every effect is routed through here so the dispatch
// can record an action summary for the trace.
class AgentContext {
public:
    AgentContext(Runtime& rt, const Event& ev, std::string self)
        : rt_(rt), event_(ev), self_(std::move(self)) {}

    const Event& event() const { return event_; }
    const std::string& self() const { return self_; }

    std::uint64_t send(Performative p, const std::string& to, Json payload,
                       std::optional<std::uint64_t> correlation_id = std::nullopt);
    // Reply to the event's message, carrying its id as correlation_id.
    std::uint64_t reply(Performative p, Json payload);
    std::uint64_t update_belief(const std::string& key, Json value);
    std::optional<Belief> belief(const std::string& key) const { return rt_.belief(key); }
    std::uint64_t schedule_timer(Json payload);
    void note(const std::string& action);

    const std::vector<std::string>& actions() const { return actions_; }

private:
    Runtime& rt_;
    const Event& event_;
    std::string self_;
    std::vector<std::string> actions_;
};

// Post-run verification used by tests and the pipeline's safety check. Each
// returns human-readable violation descriptions; empty means the property held.
std::vector<std::string> check_reply_completeness(const Runtime& rt);
std::vector<std::string> check_pairwise_fifo(const Runtime& rt);
std::vector<std::string> check_no_lost_events(const Runtime& rt);
std::vector<std::string> check_belief_monotonicity(const Runtime& rt);
std::vector<std::string> check_protocol_safety(const Runtime& rt);

}  // namespace agentclass
