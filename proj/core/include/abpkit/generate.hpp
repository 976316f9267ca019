#pragma once

#include <cstdint>
#include <vector>

#include "abpkit/abp.hpp"
#include "abpkit/rng.hpp"

namespace abpkit {

struct SmAbpParams {
  int nvars = 8;
  int layers = 8;           // index of the sink layer
  int max_width = 4;
  int max_nodes = 40;       // including source and sink
  int extra_edge_percent = 35;
  int const_percent = 15;
};

/// Random layered program, syntactic multilinear by construction: an edge
/// leaving a reads a variable outside X_{s,a}, or a constant when none is left.
/// Every node lies on some s -> t path.
Abp random_smabp(Rng& rng, const SmAbpParams& params, const PrimeField& field = PrimeField{});

struct OrderedParams {
  int nvars = 6;
  int num_orders = 2;
  int layers = 8;
  int max_width = 3;  // per block
  int max_nodes = 60;  // shared by the blocks; each block still gets one node per layer
  int const_percent = 15;
};

struct OrderedInstance {
  Abp abp;
  OrderList orders;
};

/// num_orders blocks sharing only s and t; block i reads variables in
/// increasing pi_i positions, so the program is ordered for the returned list.
OrderedInstance random_l_ordered(Rng& rng, const OrderedParams& params, const PrimeField& field = PrimeField{});

struct CircularParams {
  int nvars = 8;
  int max_width = 3;
  int extra_edge_percent = 35;
  int const_percent = 10;
};

struct CircularInstance {
  Abp abp;
  Permutation pi;
  int rotation = 0;
};

/// Read-once oblivious program whose layer t reads pi at position rotation + t (mod n).
CircularInstance random_rotated_roabp(Rng& rng, const CircularParams& params, const PrimeField& field = PrimeField{});

Permutation random_permutation(Rng& rng, int n);

/// `terms` random monomials inside `support`, coefficients in [-max_coeff, max_coeff] \ {0}.
MultilinearPoly random_poly(Rng& rng, int nvars, Monomial support, int terms, int max_coeff = 3,
                            const PrimeField& field = PrimeField{});

}  // namespace abpkit
