#pragma once

#include <string>
#include <string_view>

#include "abpkit/abp.hpp"
#include "abpkit/decompose.hpp"
#include "abpkit/formula.hpp"
#include "abpkit/fullrank.hpp"
#include "abpkit/interval.hpp"
#include "abpkit/ordered.hpp"
#include "abpkit/partition.hpp"

// JSON encodings. Writers produce canonical text (sorted keys, sorted terms),
// so parse -> write reproduces a writer's output byte for byte. Readers throw
// ValidationError on malformed input. indent < 0 gives compact output.
namespace abpkit {

std::string poly_to_json(const MultilinearPoly& f, int indent = -1);
MultilinearPoly poly_from_json(std::string_view text);

std::string abp_to_json(const Abp& p, int indent = -1);
Abp abp_from_json(std::string_view text);

std::string permutation_to_json(const Permutation& pi);
Permutation permutation_from_json(std::string_view text);
std::string orders_to_json(const OrderList& orders, int indent = -1);
OrderList orders_from_json(std::string_view text);

/// Embeds the ABP the leaves refer to.
std::string formula_to_json(const Formula& f, int indent = -1);
Formula formula_from_json(std::string_view text);

std::string depth4_to_json(const Depth4Form& d, int indent = -1);
Depth4Form depth4_from_json(std::string_view text);

std::string decomposition_to_json(const Decomposition& d, const DecompositionCheck& check, int indent = -1);

std::string partition_to_json(const Partition& phi);
Partition partition_from_json(std::string_view text);

/// {"m", "partition", "rank"}.
std::string rank_report_to_json(const Partition& phi, int rank, int indent = -1);

/// Polynomial object plus a "w" sidecar listing every substituted w_{i,k,j}.
std::string fullrank_to_json(const FullRankResult& r, int indent = -1);

std::string interval_to_json(const CircularInterval& i);
std::string interval_witness_to_json(const IntervalWitness& w, int indent = -1);

/// {"edges": [...], "vars": [...]} for a path of p.
std::string path_to_json(const Abp& p, const Path& path);

/// Copy mapping, padding tags and band boundaries of an order-to-pass result (Q itself excluded).
std::string pass_mapping_to_json(const PassResult& r, int indent = -1);
PassResult pass_from_json(std::string_view q_text, std::string_view mapping_text);

}  // namespace abpkit
