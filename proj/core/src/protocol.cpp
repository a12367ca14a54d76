#include "r3r/protocol.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <stdexcept>

namespace r3r {

const char* to_string(UpdateOutcome o) {
    switch (o) {
        case UpdateOutcome::Joined: return "Joined";
        case UpdateOutcome::Committed: return "Committed";
        case UpdateOutcome::KeptOld: return "KeptOld";
        case UpdateOutcome::JoinRejected: return "JoinRejected";
    }
    return "?";
}

Point2 agent_position(const World& world, int id, double t) {
    const AgentRecord& a = world.agents.at(static_cast<size_t>(id));
    if (a.status == AgentStatus::Active && a.committed) {
        return sample_at(a.committed->cand.base, t).position();
    }
    return a.state.position();
}

CommGraph build_comm_graph(const World& world, double t) {
    CommGraph g;
    g.t = t;
    g.r_comm = world.params.r_comm();
    for (const AgentRecord& a : world.agents) {
        if (a.status != AgentStatus::Active) continue;
        g.members.push_back(a.id);
        g.positions.push_back(agent_position(world, a.id, t));
    }
    return g;
}

std::vector<int> neighbors_of(const CommGraph& g, int id) {
    auto it = std::find(g.members.begin(), g.members.end(), id);
    if (it == g.members.end()) {
        throw std::invalid_argument("neighbors_of: agent is not Active in this graph");
    }
    size_t self = static_cast<size_t>(it - g.members.begin());
    std::vector<int> out;
    for (size_t j = 0; j < g.members.size(); ++j) {
        if (j == self) continue;
        if (dist_point_point(g.positions[self], g.positions[j]) <= g.r_comm) {
            out.push_back(g.members[j]);
        }
    }
    return out;
}

double next_trigger(const AgentRecord& agent, const ReplanTrigger& trigger, double t) {
    if (agent.status != AgentStatus::Active || !agent.committed) {
        throw std::invalid_argument("next_trigger: agent is not Active");
    }
    double periodic = t + trigger.period;
    double entry = agent.committed->cand.base.tail->entry_time;
    double near_switch = entry - trigger.lead > t ? entry - trigger.lead : t + trigger.lead;
    switch (trigger.policy) {
        case ReplanTrigger::Policy::Periodic: return periodic;
        case ReplanTrigger::Policy::NearSwitch: return near_switch;
        case ReplanTrigger::Policy::Hybrid: return std::min(periodic, near_switch);
    }
    return periodic;
}

std::vector<ArbitrationRequest> arbitration_schedule(std::vector<ArbitrationRequest> requests,
                                                     double r_comm, double v, double eps) {
    std::sort(requests.begin(), requests.end(), [](const auto& a, const auto& b) {
        if (a.t != b.t) return a.t < b.t;
        return a.agent < b.agent;
    });
    double conflict_range = r_comm + 2.0 * v * eps;
    for (size_t i = 0; i < requests.size(); ++i) {
        for (size_t j = 0; j < i; ++j) {
            if (requests[j].t != requests[i].t) continue;
            if (dist_point_point(requests[i].position, requests[j].position) > conflict_range) {
                continue;
            }
            requests[i].t = requests[j].t + eps;
        }
    }
    std::sort(requests.begin(), requests.end(), [](const auto& a, const auto& b) {
        if (a.t != b.t) return a.t < b.t;
        return a.agent < b.agent;
    });
    return requests;
}

namespace {

/// Deterministic per-(seed, agent, iteration) planner seed (splitmix64 mix).
uint64_t derive_seed(uint64_t base, int agent, int iteration) {
    uint64_t z = base + 0x9e3779b97f4a7c15ULL * (static_cast<uint64_t>(agent) + 1) +
                 0xbf58476d1ce4e5b9ULL * (static_cast<uint64_t>(iteration + 1));
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

}  // namespace

UpdateRecord update_state(World& world, int id, double t) {
    AgentRecord& agent = world.agents.at(static_cast<size_t>(id));
    if (agent.status == AgentStatus::Retired) {
        throw std::logic_error("update_state: retired agent");
    }
    bool joining = agent.status == AgentStatus::Pending;

    DubinsState state = joining ? agent.state : sample_at(agent.committed->cand.base, t);
    Point2 here = state.position();

    // neighbor commitments gathered instantaneously, range-limited
    std::vector<CommitPtr> neighbor_commits;
    std::vector<int> neighbor_ids;
    for (const AgentRecord& other : world.agents) {
        if (other.id == id || other.status != AgentStatus::Active) continue;
        Point2 p = sample_at(other.committed->cand.base, t).position();
        if (dist_point_point(here, p) <= world.params.r_comm()) {
            neighbor_commits.push_back(other.committed);
            neighbor_ids.push_back(other.id);
        }
    }

    PlannerConfig pcfg = world.planner;
    pcfg.rng_seed = derive_seed(world.seed, id, agent.iteration + 1);

    auto wall0 = std::chrono::steady_clock::now();
    ReplanResult rr = attempt_replan(state, agent.goal, t, neighbor_commits, world.env,
                                     world.params, world.gatekeeper, pcfg, world.dyn);
    auto wall1 = std::chrono::steady_clock::now();

    UpdateRecord rec;
    rec.n_neighbors = static_cast<int>(neighbor_commits.size());
    rec.replan_wall_ms = std::chrono::duration<double, std::milli>(wall1 - wall0).count();
    rec.attempts = std::move(rr.attempts);

    if (rr.success) {
        auto commit = std::make_shared<CommittedTrajectory>();
        commit->cand = std::move(*rr.candidate);
        commit->committed_at = t;
        commit->owner = id;
        commit->certificate = std::move(rr.certificate);
        commit->neighbor_snapshot = std::move(neighbor_commits);
        agent.committed = std::move(commit);
        agent.iteration += 1;
        agent.last_commit_time = t;
        agent.state = state;
        if (joining) {
            agent.status = AgentStatus::Active;
            agent.join_time = t;
            rec.outcome = UpdateOutcome::Joined;
        } else {
            rec.outcome = UpdateOutcome::Committed;
        }
        rec.switch_time = agent.committed->certificate.switch_time;
    } else {
        rec.outcome = joining ? UpdateOutcome::JoinRejected : UpdateOutcome::KeptOld;
    }
    return rec;
}

}  // namespace r3r
