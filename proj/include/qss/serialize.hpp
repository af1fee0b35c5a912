#pragma once

#include <string>
#include <vector>

#include "qss/analysis.hpp"
#include "qss/protocol.hpp"

namespace qss {

// Full audit-trail export; keys appear in declaration order so identical runs
// produce byte-identical documents. indent < 0 emits compact JSON.
std::string transcript_to_json(const Transcript& transcript, int indent = -1);

// One row per round: index,basis,kept,is_check,check_error. The basis column
// is Z/X for product, the announced combo (e.g. XYY) for ghz, and the
// per-channel basis pair for two_bb84.
std::string transcript_to_csv(const Transcript& transcript);

std::string ledger_to_json(const ResourceLedger& ledger);
std::string leakage_to_json(const LeakageReport& report);
std::string qber_to_json(const QberSummary& summary);

struct ResourceRow {
    std::string name;
    std::string protocol;
    std::string efficiency;  // "-" for static rows
    ResourceLedger ledger;
};

// Aligned plain-text table for terminal display.
std::string render_resource_table(const std::vector<ResourceRow>& rows);

}  // namespace qss
