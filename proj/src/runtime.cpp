#include "agentclass/runtime.hpp"

#include <algorithm>

namespace agentclass {

std::string performative_str(Performative p) {
    switch (p) {
        case Performative::request: return "request";
        case Performative::inform: return "inform";
        case Performative::report: return "report";
        case Performative::approve: return "approve";
        case Performative::feedback: return "feedback";
    }
    return "inform";
}

Performative parse_performative(const std::string& text) {
    if (text == "request") return Performative::request;
    if (text == "inform") return Performative::inform;
    if (text == "report") return Performative::report;
    if (text == "approve") return Performative::approve;
    if (text == "feedback") return Performative::feedback;
    throw DomainError("BadPerformative", "unknown performative '" + text + "'");
}

std::string event_kind_str(EventKind k) {
    switch (k) {
        case EventKind::percept_arrived: return "percept_arrived";
        case EventKind::message_arrived: return "message_arrived";
        case EventKind::belief_changed: return "belief_changed";
        case EventKind::timer: return "timer";
    }
    return "percept_arrived";
}

bool Protocol::permits(Performative p, const std::string& from_role,
                       const std::string& to_role) const {
    if (open) return true;
    return allowed.count({p, from_role, to_role}) != 0;
}

std::string format_trace_record(const TraceRecord& r) {
    std::string out = "step=" + std::to_string(r.step);
    out += " agent=" + r.agent;
    out += " event=" + event_kind_str(r.kind);
    out += " msg=" + (r.message_id ? std::to_string(*r.message_id) : std::string("-"));
    out += " corr=" + (r.correlation_id ? std::to_string(*r.correlation_id) : std::string("-"));
    out += " actions=[";
    for (std::size_t i = 0; i < r.actions.size(); ++i) {
        if (i) out += ';';
        out += r.actions[i];
    }
    out += "]";
    return out;
}

std::string format_trace(const std::vector<TraceRecord>& trace) {
    std::string out;
    for (const auto& r : trace) {
        out += format_trace_record(r);
        out += '\n';
    }
    return out;
}

void Runtime::register_agent(const std::string& name, const std::string& role,
                             std::vector<Plan> plans) {
    if (name.empty()) throw DomainError("BadAgentName", "agent name must be nonempty");
    if (agents_.count(name)) throw DomainError("DuplicateAgent", "agent '" + name + "' already registered");
    for (const auto& plan : plans) {
        if (!plan.trigger)
            throw DomainError("BadPlan", "plan '" + plan.name + "' has no trigger");
        if (plan.steps.empty())
            throw DomainError("BadPlan", "plan '" + plan.name + "' has no steps");
        for (const auto& step : plan.steps)
            if (!step.run)
                throw DomainError("BadPlan", "plan '" + plan.name + "' step '" + step.name +
                                                 "' has no body");
    }
    AgentEntry entry;
    entry.name = name;
    entry.role = role;
    entry.plans = std::move(plans);
    entry.order = registration_order_.size();
    agents_.emplace(name, std::move(entry));
    registration_order_.push_back(name);
}

std::optional<std::string> Runtime::role_of(const std::string& name) const {
    auto it = agents_.find(name);
    if (it == agents_.end()) return std::nullopt;
    return it->second.role;
}

void Runtime::subscribe_beliefs(const std::string& agent, const std::string& key_prefix) {
    auto it = agents_.find(agent);
    if (it == agents_.end()) throw DomainError("UnknownAgent", "no agent named '" + agent + "'");
    it->second.belief_prefixes.push_back(key_prefix);
}

std::uint64_t Runtime::enqueue(EventKind kind, const std::string& owner, Json payload,
                               std::optional<AgentMessage> message) {
    Event ev;
    ev.id = next_event_id_++;
    ev.kind = kind;
    ev.owner = owner;
    ev.payload = std::move(payload);
    ev.message = std::move(message);
    const std::uint64_t id = ev.id;
    pending_.emplace(id, std::move(ev));
    return id;
}

std::uint64_t Runtime::send(const std::string& from, Performative p, const std::string& to,
                            Json payload, std::optional<std::uint64_t> correlation_id) {
    auto from_it = agents_.find(from);
    if (from_it == agents_.end()) throw DomainError("UnknownAgent", "no sender named '" + from + "'");
    auto to_it = agents_.find(to);
    if (to_it == agents_.end()) throw DomainError("UnknownAgent", "no recipient named '" + to + "'");
    if (!protocol_.permits(p, from_it->second.role, to_it->second.role))
        throw DomainError("ProtocolViolation", "(" + performative_str(p) + ", " +
                                                   from_it->second.role + " -> " +
                                                   to_it->second.role + ") not allowed by protocol '" +
                                                   protocol_.name + "'");
    AgentMessage msg;
    msg.id = next_message_id_++;
    msg.correlation_id = correlation_id;
    msg.from = from;
    msg.to = to;
    msg.performative = p;
    msg.payload = std::move(payload);
    const std::uint64_t id = msg.id;
    message_log_.push_back(msg);
    enqueue(EventKind::message_arrived, to, Json(), std::move(msg));
    return id;
}

std::uint64_t Runtime::inject_percept(const std::string& owner, Json payload) {
    if (!agents_.count(owner)) throw DomainError("UnknownAgent", "no agent named '" + owner + "'");
    return enqueue(EventKind::percept_arrived, owner, std::move(payload), std::nullopt);
}

std::uint64_t Runtime::schedule_timer(const std::string& owner, Json payload) {
    if (!agents_.count(owner)) throw DomainError("UnknownAgent", "no agent named '" + owner + "'");
    return enqueue(EventKind::timer, owner, std::move(payload), std::nullopt);
}

std::uint64_t Runtime::update_belief(const std::string& agent, const std::string& key, Json value) {
    Belief b;
    b.key = key;
    b.value = std::move(value);
    auto it = beliefs_.find(key);
    b.version = (it == beliefs_.end()) ? 1 : it->second.version + 1;
    b.updated_by = agent;
    beliefs_[key] = b;
    belief_history_.push_back(b);
    for (const auto& name : registration_order_) {
        const AgentEntry& entry = agents_.at(name);
        const bool interested =
            std::any_of(entry.belief_prefixes.begin(), entry.belief_prefixes.end(),
                        [&](const std::string& prefix) { return key.rfind(prefix, 0) == 0; });
        if (interested)
            enqueue(EventKind::belief_changed, name,
                    Json{{"key", key}, {"version", b.version}, {"updated_by", agent}},
                    std::nullopt);
    }
    return b.version;
}

std::optional<Belief> Runtime::belief(const std::string& key) const {
    auto it = beliefs_.find(key);
    if (it == beliefs_.end()) return std::nullopt;
    return it->second;
}

std::vector<TraceRecord> Runtime::run_until_quiescent(std::size_t max_steps) {
    if (max_steps == 0) throw DomainError("BadStepLimit", "max_steps must be >= 1");
    std::vector<TraceRecord> call_records;
    std::size_t steps_this_call = 0;
    while (!pending_.empty()) {
        if (steps_this_call == max_steps)
            throw StepLimitExceeded("no quiescence after " + std::to_string(max_steps) + " steps",
                                    call_records);
        Event ev = std::move(pending_.begin()->second);
        pending_.erase(pending_.begin());
        ++steps_this_call;

        TraceRecord rec;
        rec.step = ++dispatched_;
        rec.agent = ev.owner;
        rec.kind = ev.kind;
        if (ev.message) {
            rec.message_id = ev.message->id;
            rec.correlation_id = ev.message->correlation_id;
        }

        AgentContext ctx(*this, ev, ev.owner);
        const AgentEntry& entry = agents_.at(ev.owner);
        const Plan* chosen = nullptr;
        for (const auto& plan : entry.plans) {
            if (plan.trigger(ev)) {
                chosen = &plan;
                break;
            }
        }
        if (chosen) {
            for (const auto& step : chosen->steps) {
                try {
                    step.run(ctx);
                } catch (const StepLimitExceeded& e) {
                    // A plan pulled the brake (e.g. a feedback-cycle cap).
                    // Attach everything dispatched in this call, including the
                    // partially executed record, and rethrow.
                    rec.actions = ctx.actions();
                    call_records.push_back(rec);
                    trace_.push_back(call_records.back());
                    throw StepLimitExceeded(e.detail(), call_records);
                }
            }
        }
        rec.actions = ctx.actions();
        call_records.push_back(std::move(rec));
        trace_.push_back(call_records.back());
    }
    return call_records;
}

EventStats Runtime::event_stats() const {
    EventStats s;
    s.emitted = static_cast<std::size_t>(next_event_id_ - 1);
    s.dispatched = dispatched_;
    s.pending = pending_.size();
    return s;
}

std::uint64_t AgentContext::send(Performative p, const std::string& to, Json payload,
                                 std::optional<std::uint64_t> correlation_id) {
    const std::uint64_t id = rt_.send(self_, p, to, std::move(payload), correlation_id);
    actions_.push_back("send:" + performative_str(p) + "->" + to + "#" + std::to_string(id));
    return id;
}

std::uint64_t AgentContext::reply(Performative p, Json payload) {
    if (!event_.message)
        throw DomainError("BadReply", "event has no message to reply to");
    const std::uint64_t id =
        rt_.send(self_, p, event_.message->from, std::move(payload), event_.message->id);
    actions_.push_back("reply:" + performative_str(p) + "->" + event_.message->from + "#" +
                       std::to_string(id));
    return id;
}

std::uint64_t AgentContext::update_belief(const std::string& key, Json value) {
    const std::uint64_t version = rt_.update_belief(self_, key, std::move(value));
    actions_.push_back("belief:" + key + "@v" + std::to_string(version));
    return version;
}

std::uint64_t AgentContext::schedule_timer(Json payload) {
    const std::uint64_t id = rt_.schedule_timer(self_, std::move(payload));
    actions_.push_back("timer#" + std::to_string(id));
    return id;
}

void AgentContext::note(const std::string& action) {
    std::string clean = action;
    std::replace(clean.begin(), clean.end(), ';', ',');
    std::replace(clean.begin(), clean.end(), '\n', ' ');
    actions_.push_back(clean);
}

std::vector<std::string> check_reply_completeness(const Runtime& rt) {
    std::vector<std::string> issues;
    const auto& log = rt.message_log();
    for (const auto& m : log) {
        if (!rt.protocol().requires_reply.count(m.performative)) continue;
        std::size_t replies = 0;
        for (const auto& r : log)
            if (r.correlation_id && *r.correlation_id == m.id) ++replies;
        if (replies != 1)
            issues.push_back("message #" + std::to_string(m.id) + " (" +
                             performative_str(m.performative) + " " + m.from + "->" + m.to +
                             ") has " + std::to_string(replies) + " replies, expected 1");
    }
    return issues;
}

std::vector<std::string> check_pairwise_fifo(const Runtime& rt) {
    std::vector<std::string> issues;
    std::set<std::uint64_t> delivered;
    for (const auto& rec : rt.trace())
        if (rec.message_id) delivered.insert(*rec.message_id);

    std::map<std::uint64_t, const AgentMessage*> by_id;
    for (const auto& m : rt.message_log()) by_id[m.id] = &m;

    // Per (from, to) pair: delivery order must equal send order, restricted to
    // the messages that were actually delivered.
    std::map<std::pair<std::string, std::string>, std::vector<std::uint64_t>> expected, actual;
    for (const auto& m : rt.message_log())
        if (delivered.count(m.id)) expected[{m.from, m.to}].push_back(m.id);
    for (const auto& rec : rt.trace()) {
        if (!rec.message_id) continue;
        const AgentMessage* m = by_id.at(*rec.message_id);
        actual[{m->from, m->to}].push_back(m->id);
    }
    for (const auto& [pair, exp] : expected) {
        const auto& act = actual[pair];
        if (exp != act)
            issues.push_back("deliveries " + pair.first + "->" + pair.second +
                             " do not follow send order");
    }
    return issues;
}

std::vector<std::string> check_no_lost_events(const Runtime& rt) {
    std::vector<std::string> issues;
    const EventStats s = rt.event_stats();
    if (s.emitted != s.dispatched + s.pending)
        issues.push_back("emitted " + std::to_string(s.emitted) + " != dispatched " +
                         std::to_string(s.dispatched) + " + pending " + std::to_string(s.pending));
    return issues;
}

std::vector<std::string> check_belief_monotonicity(const Runtime& rt) {
    std::vector<std::string> issues;
    std::map<std::string, std::uint64_t> last;
    for (const auto& b : rt.belief_history()) {
        const std::uint64_t expected = last.count(b.key) ? last[b.key] + 1 : 1;
        if (b.version != expected)
            issues.push_back("belief '" + b.key + "' jumped to version " +
                             std::to_string(b.version) + ", expected " + std::to_string(expected));
        last[b.key] = b.version;
    }
    return issues;
}

std::vector<std::string> check_protocol_safety(const Runtime& rt) {
    std::vector<std::string> issues;
    for (const auto& m : rt.message_log()) {
        const auto from_role = rt.role_of(m.from);
        const auto to_role = rt.role_of(m.to);
        if (!from_role || !to_role) {
            issues.push_back("message #" + std::to_string(m.id) + " involves unknown agent");
            continue;
        }
        if (!rt.protocol().permits(m.performative, *from_role, *to_role))
            issues.push_back("message #" + std::to_string(m.id) + " (" +
                             performative_str(m.performative) + ", " + *from_role + " -> " +
                             *to_role + ") violates protocol '" + rt.protocol().name + "'");
    }
    return issues;
}

}  // namespace agentclass
