#pragma once

// Internals shared by the linear-scan matcher and the blocked index. Both
// funnel every candidate through the same acceptance predicate, which is
// what guarantees they return identical results.

#include <algorithm>
#include <string>
#include <vector>

#include "reident/matcher.hpp"

namespace reident::detail {

Verdict field_verdict(Field field, const ExternalRecord& ext, const HospitalRecord& rec,
                      int slack_days);

/// True when no considered field fails and at least one actually compares.
bool accepts(const ExternalRecord& ext, const HospitalRecord& rec, const FieldSet& use,
             int slack_days);

template <class Query>
MatchOutcome relax_impl(const MatchConfig& config, Query&& query, RelaxationTrace* trace) {
    auto record_step = [&](int level, const FieldSet& dropped, std::size_t n) {
        if (trace) trace->push_back({level, dropped, n});
    };

    MatchOutcome outcome;
    std::vector<std::string> base = query(FieldSet::all());
    record_step(0, FieldSet{}, base.size());
    if (base.size() == 1) {
        outcome.classification = MatchClass::Unique;
        outcome.fields_used = FieldSet::all();
        outcome.candidate_ids = std::move(base);
        return outcome;
    }
    if (base.size() > 1) {
        // Several records fit every available field: terminal ambiguity.
        outcome.classification = MatchClass::Ambiguous;
        outcome.fields_used = FieldSet::all();
        outcome.candidate_ids = std::move(base);
        return outcome;
    }

    std::vector<Field> droppable = config.droppable.fields();
    int max_drop = std::min<int>(config.max_drop, static_cast<int>(droppable.size()));

    for (int level = 1; level <= max_drop; ++level) {
        struct Singleton {
            FieldSet dropped;
            std::string id;
        };
        std::vector<Singleton> singletons;

        // All size-`level` subsets of the droppable fields, canonical order.
        std::vector<int> pick(static_cast<std::size_t>(level));
        auto run_combo = [&](const FieldSet& dropped) {
            std::vector<std::string> ids = query(FieldSet::all().without_all(dropped));
            record_step(level, dropped, ids.size());
            if (ids.size() == 1) singletons.push_back({dropped, std::move(ids.front())});
        };
        auto recurse = [&](auto&& self, int depth, int start) -> void {
            if (depth == level) {
                FieldSet dropped;
                for (int i : pick) dropped.insert(droppable[static_cast<std::size_t>(i)]);
                run_combo(dropped);
                return;
            }
            for (int i = start; i < static_cast<int>(droppable.size()); ++i) {
                pick[static_cast<std::size_t>(depth)] = i;
                self(self, depth + 1, i + 1);
            }
        };
        recurse(recurse, 0, 0);

        if (singletons.empty()) continue;

        bool agree = true;
        for (const auto& s : singletons) agree = agree && s.id == singletons.front().id;
        if (agree) {
            outcome.classification = MatchClass::Unique;
            outcome.relaxation_level = level;
            outcome.dropped = singletons.front().dropped;
            outcome.fields_used = FieldSet::all().without_all(outcome.dropped);
            outcome.candidate_ids = {singletons.front().id};
        } else {
            // Different suppression choices point at different records; no
            // defensible winner, so report the disagreement itself.
            outcome.classification = MatchClass::Conflict;
            for (const auto& s : singletons) outcome.candidate_ids.push_back(s.id);
            std::sort(outcome.candidate_ids.begin(), outcome.candidate_ids.end());
            outcome.candidate_ids.erase(
                std::unique(outcome.candidate_ids.begin(), outcome.candidate_ids.end()),
                outcome.candidate_ids.end());
        }
        return outcome;
    }

    outcome.classification = MatchClass::NoMatch;
    return outcome;
}

}  // namespace reident::detail
