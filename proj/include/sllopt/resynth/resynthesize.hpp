/*!
  \file resynthesize.hpp
  \brief Greedy sweep eliminating cross-die fanins by resubstitution
*/

#pragma once

#include "../metrics.hpp"
#include "../netlist.hpp"
#include "../partition.hpp"
#include "../traversal.hpp"
#include "apply.hpp"
#include "care_set.hpp"
#include "divisors.hpp"
#include "equiv_func.hpp"
#include "params.hpp"
#include "window.hpp"

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace sllopt
{

enum class pivot_outcome
{
  skipped,
  frozen,
  no_window,
  no_candidate,
  rejected_cycle,
  rejected_criterion,
  rejected_verification,
  committed
};

inline std::string_view to_string( pivot_outcome o )
{
  switch ( o )
  {
  case pivot_outcome::skipped:
    return "skipped";
  case pivot_outcome::frozen:
    return "frozen";
  case pivot_outcome::no_window:
    return "no-window";
  case pivot_outcome::no_candidate:
    return "no-candidate";
  case pivot_outcome::rejected_cycle:
    return "rejected-cycle";
  case pivot_outcome::rejected_criterion:
    return "rejected-criterion";
  case pivot_outcome::rejected_verification:
    return "rejected-verification";
  default:
    return "committed";
  }
}

struct pivot_record
{
  uint32_t pass{ 0u };
  std::string pivot;
  pivot_outcome outcome{ pivot_outcome::skipped };
  uint32_t cross_before{ 0u };
  uint32_t cross_after{ 0u };
  std::string removed_fanin;
  std::vector<std::string> support;
  std::string function; /* binary, most significant minterm first */
  std::vector<std::string> removed_nodes;
  uint32_t window_pis{ 0u };
  uint32_t window_nodes{ 0u };
  uint32_t divisors{ 0u };
  uint32_t in_die_divisors{ 0u };
  uint64_t care_minterms{ 0u };
  int64_t delta_sll_fo{ 0 };
  int64_t delta_luts{ 0 };
  double delta_rho{ 0.0 };
};

struct resynth_report
{
  std::vector<pivot_record> records;
  uint32_t passes_run{ 0u };
  uint32_t commits{ 0u };
  uint64_t luts_before{ 0u }, luts_after{ 0u };
  uint64_t sll_fo_before{ 0u }, sll_fo_after{ 0u };
  double rho_before{ 0.0 }, rho_after{ 0.0 };
};

namespace detail
{

/* Window outputs agree, over every window minterm admitted by `domain`, after replacing the pivot. */
inline bool window_miter_holds( window_simulation const& sim, resub_candidate const& c, truth_table const& domain )
{
  std::vector<truth_table const*> in;
  for ( auto s : c.support )
    in.push_back( &sim.value( s ) );
  auto const replacement = evaluate_lut( c.function, in, sim.num_vars() );
  auto const before = sim.outputs_with( sim.value( c.pivot ) );
  auto const after = sim.outputs_with( replacement );
  for ( std::size_t i = 0; i < before.size(); ++i )
    if ( intersects( before[i] ^ after[i], domain ) )
      return false;
  return true;
}

} /* namespace detail */

/*! \brief Sweeps LUTs in (level, id) order and commits cross-die fanin eliminations.
 *
 * A commit needs a candidate with fewer cross-die fanins than the pivot and
 * no LUT count increase.  `a` is extended for new nodes; removed nodes keep
 * their die but lose their weight.  `predicate` restricts care sets where it
 * is expressible over the window PIs.
 */
inline resynth_report resynthesize( netlist& ntk, die_assignment& a, resynth_params const& ps,
                                    care_predicate const* predicate = nullptr )
{
  if ( ps.d2 < 1u || ps.window_pi_cap < 1u || ps.divisor_cap < 1u || ps.max_augment < 1u )
    throw error( "resynthesis caps and depths must be at least 1" );
  validate_assignment( ntk, a );

  resynth_report rep;
  rep.luts_before = ntk.num_luts();
  rep.sll_fo_before = count_sll_fo( ntk, a );
  rep.rho_before = imbalance( a );

  auto level = compute_levels( ntk );
  for ( uint32_t pass = 0; ps.passes == 0u || pass < ps.passes; ++pass )
  {
    ++rep.passes_run;
    uint32_t pass_commits = 0;
    for ( auto pivot : topological_order( ntk, level ) )
    {
      if ( !ntk.is_lut( pivot ) )
        continue;
      pivot_record rec;
      rec.pass = pass;
      rec.pivot = ntk.name( pivot );
      auto const die = a.die( pivot );
      rec.cross_before = cross_die_count( ntk.get( pivot ).fanins, a, die );
      auto finish = [&]( pivot_outcome o ) {
        rec.outcome = o;
        rep.records.push_back( std::move( rec ) );
      };

      if ( rec.cross_before == 0u )
      {
        finish( pivot_outcome::skipped );
        continue;
      }
      if ( ps.freeze_die && *ps.freeze_die != die )
      {
        finish( pivot_outcome::frozen );
        continue;
      }

      auto const w = build_window( ntk, level, pivot, ps );
      if ( !w )
      {
        finish( pivot_outcome::no_window );
        continue;
      }
      rec.window_pis = static_cast<uint32_t>( w->pis.size() );
      rec.window_nodes = static_cast<uint32_t>( w->nodes.size() );

      auto const divisors = collect_divisors( ntk, level, *w, a, ps );
      rec.divisors = static_cast<uint32_t>( divisors.candidates.size() );
      rec.in_die_divisors = static_cast<uint32_t>( divisors.in_die.size() );

      window_simulation sim( ntk, *w );
      auto const care = extract_care_set( ntk, *w, sim, predicate );
      rec.care_minterms = care.count_ones();

      auto const u = *select_cross_die_fanin( ntk, level, a, pivot );
      rec.removed_fanin = ntk.name( u );
      auto cand = find_equiv_func( ntk, sim, pivot, u, divisors, care, ps.max_augment );
      if ( !cand )
      {
        finish( pivot_outcome::no_candidate );
        continue;
      }
      for ( auto s : cand->support )
        rec.support.push_back( ntk.name( s ) );
      rec.function = cand->function.to_binary();
      rec.cross_after = cross_die_count( cand->support, a, die );

      if ( rec.cross_after >= rec.cross_before || cand->support.size() > ntk.k_max() )
      {
        finish( pivot_outcome::rejected_criterion );
        continue;
      }
      if ( ps.verify_each_commit )
      {
        auto domain = truth_table::constant( sim.num_vars(), true );
        if ( predicate )
          if ( auto p = predicate->over_window( ntk, *w ) )
            domain = *p;
        if ( !detail::window_miter_holds( sim, *cand, domain ) )
        {
          finish( pivot_outcome::rejected_verification );
          continue;
        }
      }

      auto const rho_before = imbalance( a );
      auto const luts_before = ntk.num_luts();
      auto commit = apply_resubstitution( ntk, a, level, *cand );
      if ( !commit )
      {
        finish( pivot_outcome::rejected_cycle );
        continue;
      }
      if ( ntk.num_luts() > luts_before )
        throw error( "internal: resubstitution increased the LUT count" );
      for ( auto n : commit->removed )
        rec.removed_nodes.push_back( ntk.name( n ) );
      rec.delta_sll_fo = commit->delta_sll_fo;
      rec.delta_luts = commit->delta_luts;
      rec.delta_rho = imbalance( a ) - rho_before;
      level = compute_levels( ntk );
      ++pass_commits;
      ++rep.commits;
      finish( pivot_outcome::committed );
    }
    if ( pass_commits == 0u )
      break;
  }

  rep.luts_after = ntk.num_luts();
  rep.sll_fo_after = count_sll_fo( ntk, a );
  rep.rho_after = imbalance( a );
  return rep;
}

} /* namespace sllopt */
