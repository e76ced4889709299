#include <catch_amalgamated.hpp>

#include "common.hpp"

#include <sllopt/blif.hpp>
#include <sllopt/equiv.hpp>
#include <sllopt/metrics.hpp>
#include <sllopt/resynth.hpp>

#include <random>
#include <set>

using namespace sllopt;
using namespace sllopt::test;

namespace
{

std::set<std::string> names( netlist const& ntk, std::vector<node_id> const& ids )
{
  std::set<std::string> s;
  for ( auto id : ids )
    s.insert( ntk.name( id ) );
  return s;
}

resynth_params deep()
{
  resynth_params ps;
  ps.d1 = 100;
  ps.d2 = 100;
  return ps;
}

/* exist oracle: no two care minterms share support values but differ in f */
bool exist_by_pairs( truth_table const& f, truth_table const& care, std::vector<truth_table> const& support )
{
  for ( uint64_t m1 = 0; m1 < f.num_bits(); ++m1 )
    for ( uint64_t m2 = m1 + 1; m2 < f.num_bits(); ++m2 )
    {
      if ( !care.get_bit( m1 ) || !care.get_bit( m2 ) || f.get_bit( m1 ) == f.get_bit( m2 ) )
        continue;
      bool same = true;
      for ( auto const& s : support )
        same &= s.get_bit( m1 ) == s.get_bit( m2 );
      if ( same )
        return false;
    }
  return true;
}

struct example_setup
{
  netlist ntk = worked_example();
  die_assignment dies = worked_example_dies( ntk );
  std::vector<uint32_t> level = compute_levels( ntk );
  care_predicate care{ care_b_eq_c() };
};

} // namespace

TEST_CASE( "window of the worked example", "[resynth][window]" )
{
  example_setup ex;
  auto const w = build_window( ex.ntk, ex.level, ex.ntk.at( "F" ), deep() );
  REQUIRE( w );
  CHECK( names( ex.ntk, w->nodes ) == std::set<std::string>{ "X", "Y", "F" } );
  CHECK( names( ex.ntk, w->pis ) == std::set<std::string>{ "a", "b", "c", "d" } );
  CHECK( names( ex.ntk, w->outputs ) == std::set<std::string>{ "Y", "F" } );

  /* default depths reach the same window */
  auto const wd = build_window( ex.ntk, ex.level, ex.ntk.at( "F" ), resynth_params{} );
  REQUIRE( wd );
  CHECK( wd->nodes == w->nodes );
}

TEST_CASE( "window with zero fanout depth", "[resynth][window]" )
{
  example_setup ex;
  auto ps = deep();
  ps.d1 = 0;
  auto const w = build_window( ex.ntk, ex.level, ex.ntk.at( "X" ), ps );
  REQUIRE( w );
  CHECK( names( ex.ntk, w->nodes ) == std::set<std::string>{ "X" } );
  CHECK( names( ex.ntk, w->outputs ) == std::set<std::string>{ "X" } );
  CHECK( names( ex.ntk, w->pis ) == std::set<std::string>{ "a", "b" } );
}

TEST_CASE( "window invariants on a wide cone", "[resynth][window][property]" )
{
  /* a balanced tree of 2-input LUTs over 20 inputs */
  netlist ntk( "cone", 2 );
  std::vector<node_id> layer;
  for ( int i = 0; i < 20; ++i )
    layer.push_back( ntk.add_pi( "i" + std::to_string( i ) ) );
  int next = 0;
  while ( layer.size() > 1u )
  {
    std::vector<node_id> up;
    for ( std::size_t i = 0; i + 1 < layer.size(); i += 2 )
      up.push_back( ntk.add_lut( "t" + std::to_string( next++ ), { layer[i], layer[i + 1] }, xor2() ) );
    if ( layer.size() % 2 )
      up.push_back( layer.back() );
    layer = up;
  }
  ntk.add_po( layer[0] );
  auto const level = compute_levels( ntk );
  resynth_params ps;
  ps.d2 = 10;
  ps.window_pi_cap = 14;
  ntk.foreach_lut( [&]( node_id pivot ) {
    auto const w = build_window( ntk, level, pivot, ps );
    if ( !w )
      return;
    REQUIRE( w->pis.size() <= 14u );
    REQUIRE( std::find( w->nodes.begin(), w->nodes.end(), pivot ) != w->nodes.end() );
    for ( auto n : w->nodes )
      for ( auto f : ntk.get( n ).fanins )
        REQUIRE( w->contains( f ) );
  } );
  auto const root_window = build_window( ntk, level, layer[0], ps );
  REQUIRE( root_window );
  CHECK( root_window->d2 < 5u );
}

TEST_CASE( "divisors of the worked example", "[resynth][divisors]" )
{
  example_setup ex;
  auto const f = ex.ntk.at( "F" );
  auto const w = build_window( ex.ntk, ex.level, f, deep() );
  REQUIRE( w );
  auto const ds = collect_divisors( ex.ntk, ex.level, *w, ex.dies, deep() );
  auto const in_die = names( ex.ntk, ds.in_die );
  CHECK( in_die.contains( "Y" ) );
  CHECK( in_die.contains( "c" ) );
  CHECK( in_die.contains( "d" ) );
  CHECK_FALSE( in_die.contains( "a" ) );
  CHECK_FALSE( in_die.contains( "b" ) );
  CHECK_FALSE( in_die.contains( "X" ) );
  CHECK_FALSE( names( ex.ntk, ds.candidates ).contains( "F" ) );

  auto capped = deep();
  capped.divisor_cap = 1;
  auto const one = collect_divisors( ex.ntk, ex.level, *w, ex.dies, capped );
  REQUIRE( one.candidates.size() == 1u );
  CHECK( one.candidates[0] == ds.candidates[0] );

  /* everything on one die: in-die set equals candidates */
  auto same = ex.dies;
  std::fill( same.die_of.begin(), same.die_of.end(), 1u );
  CHECK( collect_divisors( ex.ntk, ex.level, *w, same, deep() ).in_die == ds.candidates );
}

TEST_CASE( "care sets", "[resynth][care]" )
{
  example_setup ex;
  auto const f = ex.ntk.at( "F" );
  auto const w = build_window( ex.ntk, ex.level, f, deep() );
  REQUIRE( w );
  window_simulation sim( ex.ntk, *w );
  CHECK( extract_care_set( ex.ntk, *w, sim ).is_const1() );

  auto const care = extract_care_set( ex.ntk, *w, sim, &ex.care );
  CHECK( care.count_ones() == 8u );
  auto const ib = static_cast<uint32_t>( w->pi_index( ex.ntk.at( "b" ) ) );
  auto const ic = static_cast<uint32_t>( w->pi_index( ex.ntk.at( "c" ) ) );
  for ( uint64_t m = 0; m < care.num_bits(); ++m )
    CHECK( care.get_bit( m ) == ( ( ( m >> ib ) & 1u ) == ( ( m >> ic ) & 1u ) ) );

  /* pivot masked by a constant-0 AND is never observable */
  netlist masked;
  auto a = masked.add_pi( "a" );
  auto b = masked.add_pi( "b" );
  auto p = masked.add_lut( "p", { a, b }, xor2() );
  auto z = masked.add_lut( "z", {}, truth_table( 0 ) );
  masked.add_po( masked.add_lut( "y", { p, z }, truth_table::from_binary( "1000" ) ) );
  auto const level = compute_levels( masked );
  auto const mw = build_window( masked, level, p, deep() );
  REQUIRE( mw );
  window_simulation msim( masked, *mw );
  CHECK( extract_care_set( masked, *mw, msim ).is_const0() );
}

TEST_CASE( "exist check and interpolation on the worked example", "[resynth][exist]" )
{
  example_setup ex;
  auto const f = ex.ntk.at( "F" );
  auto const w = build_window( ex.ntk, ex.level, f, deep() );
  REQUIRE( w );
  window_simulation sim( ex.ntk, *w );
  auto const care = extract_care_set( ex.ntk, *w, sim, &ex.care );
  auto const& fv = sim.value( f );
  auto const& a = sim.value( ex.ntk.at( "a" ) );
  auto const& d = sim.value( ex.ntk.at( "d" ) );
  auto const& y = sim.value( ex.ntk.at( "Y" ) );

  CHECK( exist_check( fv, care, { &a, &d } ) );
  CHECK_FALSE( exist_check( fv, care, { &d } ) );
  CHECK( exist_check( fv, care, { &d, &y } ) );
  CHECK_THROWS( interpolate( fv, care, { &d } ) );

  auto const g = interpolate( fv, care, { &y, &d } );
  CHECK( g == xor2() );
  CHECK( interpolate( fv, care, { &a, &d } ) == xor2() );

  /* F' agrees with F on all 8 care rows */
  auto const fprime = evaluate_lut( g, std::vector<truth_table const*>{ &y, &d }, sim.num_vars() );
  CHECK( ( ( fprime ^ fv ) & care ).is_const0() );
  CHECK( ( care & ~( fprime ^ fv ) ).count_ones() == 8u );
  /* outside the care set F' and F differ on every row */
  CHECK( ( ~care & ( fprime ^ fv ) ).count_ones() == 8u );
}

TEST_CASE( "exist check and interpolation match enumeration", "[resynth][exist][property]" )
{
  std::mt19937_64 rng( 17 );
  auto random_tt = [&]( uint32_t n, unsigned density ) {
    truth_table t( n );
    for ( uint64_t m = 0; m < t.num_bits(); ++m )
      t.set_bit( m, rng() % 8u < density );
    return t;
  };
  for ( int round = 0; round < 300; ++round )
  {
    uint32_t const n = 1u + static_cast<uint32_t>( rng() % 10u );
    auto const f = random_tt( n, 4 );
    auto const care = random_tt( n, 1u + static_cast<unsigned>( rng() % 8u ) );
    std::vector<truth_table> support;
    auto const m = static_cast<uint32_t>( rng() % 5u );
    for ( uint32_t i = 0; i < m; ++i )
      support.push_back( rng() % 2u ? truth_table::nth_var( n, static_cast<uint32_t>( rng() % n ) )
                                    : random_tt( n, 4 ) );
    std::vector<truth_table const*> ptrs;
    for ( auto const& s : support )
      ptrs.push_back( &s );
    auto const expected = exist_by_pairs( f, care, support );
    REQUIRE( exist_check( f, care, ptrs ) == expected );
    if ( !expected )
      continue;
    auto const g = interpolate( f, care, ptrs );
    for ( uint64_t x = 0; x < f.num_bits(); ++x )
    {
      uint64_t p = 0;
      for ( uint32_t i = 0; i < m; ++i )
        p |= uint64_t{ support[i].get_bit( x ) } << i;
      if ( care.get_bit( x ) )
        REQUIRE( g.get_bit( p ) == f.get_bit( x ) );
    }
    /* unreached patterns are filled with 0 */
    for ( uint64_t p = 0; p < g.num_bits(); ++p )
    {
      bool reached = false;
      for ( uint64_t x = 0; x < f.num_bits() && !reached; ++x )
      {
        if ( !care.get_bit( x ) )
          continue;
        uint64_t q = 0;
        for ( uint32_t i = 0; i < m; ++i )
          q |= uint64_t{ support[i].get_bit( x ) } << i;
        reached = q == p;
      }
      if ( !reached )
        REQUIRE_FALSE( g.get_bit( p ) );
    }
  }
}

TEST_CASE( "function search on the worked example", "[resynth][search]" )
{
  example_setup ex;
  auto const f = ex.ntk.at( "F" );
  auto const w = build_window( ex.ntk, ex.level, f, deep() );
  REQUIRE( w );
  window_simulation sim( ex.ntk, *w );
  auto const care = extract_care_set( ex.ntk, *w, sim, &ex.care );
  auto const ds = collect_divisors( ex.ntk, ex.level, *w, ex.dies, deep() );
  auto const u = select_cross_die_fanin( ex.ntk, ex.level, ex.dies, f );
  REQUIRE( u );
  CHECK( ex.ntk.name( *u ) == "a" );
  auto const c = find_equiv_func( ex.ntk, sim, f, *u, ds, care );
  REQUIRE( c );
  CHECK( c->removed_fanin == ex.ntk.at( "a" ) );
  REQUIRE( c->support.size() == 2u );
  CHECK( ex.ntk.name( c->support[0] ) == "d" );
  CHECK( ex.ntk.name( c->support[1] ) == "Y" );
  CHECK( c->function == xor2() );

  /* no in-die divisors and a failing base: nothing */
  divisor_set none;
  CHECK_FALSE( find_equiv_func( ex.ntk, sim, f, *u, none, care ) );
}

TEST_CASE( "redundant cross-die fanin is dropped with the base alone", "[resynth][search]" )
{
  netlist ntk;
  auto a = ntk.add_pi( "a" );
  auto b = ntk.add_pi( "b" );
  auto u = ntk.add_pi( "u" );
  /* v = a & b regardless of u */
  auto v = ntk.add_lut( "v", { a, u, b }, truth_table::from_binary( "10100000" ) );
  ntk.add_po( v );
  die_assignment dies;
  dies.num_dies = 2;
  ntk.foreach_node( [&]( node_id id ) { dies.set( id, id == u ? 1u : 0u, logic_weight( ntk, id ) ); } );

  auto const level = compute_levels( ntk );
  auto const w = build_window( ntk, level, v, resynth_params{} );
  REQUIRE( w );
  window_simulation sim( ntk, *w );
  auto const care = extract_care_set( ntk, *w, sim );
  auto const c = find_equiv_func( ntk, sim, v, u, collect_divisors( ntk, level, *w, dies, {} ), care );
  REQUIRE( c );
  CHECK( c->support == std::vector<node_id>{ a, b } );
  CHECK( c->function == truth_table::from_binary( "1000" ) );
}

TEST_CASE( "applying resubstitutions", "[resynth][apply]" )
{
  SECTION( "worked example commit" )
  {
    example_setup ex;
    resub_candidate c{ ex.ntk.at( "F" ), ex.ntk.at( "a" ), { ex.ntk.at( "d" ), ex.ntk.at( "Y" ) }, xor2() };
    CHECK( count_sll( ex.ntk, ex.dies ) == 2u );
    auto const r = apply_resubstitution( ex.ntk, ex.dies, ex.level, c );
    REQUIRE( r );
    CHECK( ex.ntk.num_luts() == 3u );
    CHECK( r->removed.empty() );
    CHECK( r->delta_sll_fo == -1 );
    CHECK( r->delta_luts == 0 );
    CHECK( count_sll( ex.ntk, ex.dies ) == 1u );
    CHECK( count_sll_fo( ex.ntk, ex.dies ) == 1u );
    CHECK( ex.dies.die( ex.ntk.at( "F" ) ) == 1u );
  }
  SECTION( "support inside the pivot's fanout cone is rejected" )
  {
    example_setup ex;
    auto const before = write_blif_string( ex.ntk );
    resub_candidate c{ ex.ntk.at( "X" ), ex.ntk.at( "a" ), { ex.ntk.at( "Y" ) }, truth_table::nth_var( 1, 0 ) };
    CHECK_FALSE( apply_resubstitution( ex.ntk, ex.dies, ex.level, c ) );
    CHECK( write_blif_string( ex.ntk ) == before );
  }
  SECTION( "exclusive fanin is removed with the pivot" )
  {
    netlist ntk;
    auto a = ntk.add_pi( "a" );
    auto c = ntk.add_pi( "c" );
    auto g = ntk.add_lut( "g", { a }, truth_table::nth_var( 1, 0 ) );
    auto p = ntk.add_lut( "p", { g, c }, truth_table::from_binary( "1000" ) );
    ntk.add_po( p );
    die_assignment dies;
    dies.num_dies = 2;
    ntk.foreach_node( [&]( node_id id ) { dies.set( id, id == g ? 1u : 0u, logic_weight( ntk, id ) ); } );
    auto const level = compute_levels( ntk );
    resub_candidate cand{ p, g, { a, c }, truth_table::from_binary( "1000" ) };
    auto const r = apply_resubstitution( ntk, dies, level, cand );
    REQUIRE( r );
    CHECK( r->removed == std::vector<node_id>{ g } );
    CHECK( r->delta_luts == -1 );
    CHECK( ntk.num_luts() == 1u );
    CHECK( dies.weight[g] == 0u );
    /* g's own input edge a->g crossed as well */
    CHECK( r->delta_sll_fo == -2 );
  }
}

TEST_CASE( "resynthesis of the worked example", "[resynth]" )
{
  example_setup ex;
  auto const original = ex.ntk;
  auto const rep = resynthesize( ex.ntk, ex.dies, resynth_params{}, &ex.care );
  CHECK( rep.commits == 1u );
  CHECK( rep.luts_before == 3u );
  CHECK( rep.luts_after == 3u );
  CHECK( rep.sll_fo_before == 2u );
  CHECK( rep.sll_fo_after == 1u );
  CHECK( count_sll( ex.ntk, ex.dies ) == 1u );

  auto const& fp = ex.ntk.get( ex.ntk.at( "F" ) );
  CHECK( names( ex.ntk, fp.fanins ) == std::set<std::string>{ "d", "Y" } );
  CHECK( fp.function == xor2() );

  equiv_params eq;
  eq.care = &ex.care;
  CHECK( check_equivalence( original, ex.ntk, eq ).equivalent() );
  CHECK_FALSE( check_equivalence( original, ex.ntk ).equivalent() );

  std::size_t committed = 0;
  for ( auto const& r : rep.records )
    if ( r.outcome == pivot_outcome::committed )
    {
      ++committed;
      CHECK( r.pivot == "F" );
      CHECK( r.removed_fanin == "a" );
      CHECK( r.delta_sll_fo == -1 );
    }
  CHECK( committed == 1u );
}

TEST_CASE( "without the injected predicate the example has no commit", "[resynth]" )
{
  example_setup ex;
  auto const rep = resynthesize( ex.ntk, ex.dies, resynth_params{} );
  CHECK( rep.commits == 0u );
}

TEST_CASE( "single-die netlist is untouched", "[resynth]" )
{
  std::mt19937_64 rng( 4 );
  auto ntk = random_netlist( rng, { 6, 40, 4, 4 } );
  die_assignment a;
  a.num_dies = 2;
  ntk.foreach_node( [&]( node_id id ) { a.set( id, 0u, logic_weight( ntk, id ) ); } );
  auto const before = write_blif_string( ntk );
  auto const rep = resynthesize( ntk, a, resynth_params{} );
  CHECK( rep.commits == 0u );
  CHECK( write_blif_string( ntk ) == before );
}

TEST_CASE( "resynthesis is safe, monotone and deterministic on random netlists", "[resynth][property]" )
{
  std::mt19937_64 rng( 123 );
  uint32_t total_commits = 0;
  for ( int round = 0; round < 60; ++round )
  {
    random_netlist_params np{ 8, 60, 4, 6, static_cast<uint32_t>( round % 2 ), 12 };
    auto const original = random_netlist( rng, np );
    auto const dies = random_assignment( original, rng, 2u + static_cast<uint32_t>( round % 2 ) );

    resynth_params ps;
    ps.passes = round % 3 == 0 ? 0u : 1u;
    auto ntk = original;
    auto a = dies;
    auto const rep = resynthesize( ntk, a, ps );
    total_commits += rep.commits;

    REQUIRE( check_equivalence( original, ntk ).equivalent() );
    REQUIRE( rep.luts_after <= rep.luts_before );
    int64_t sum = 0;
    for ( auto const& r : rep.records )
      if ( r.outcome == pivot_outcome::committed )
      {
        REQUIRE( r.delta_sll_fo < 0 );
        REQUIRE( r.delta_luts <= 0 );
        REQUIRE( r.support.size() <= ntk.k_max() );
        sum += r.delta_sll_fo;
      }
    REQUIRE( static_cast<int64_t>( rep.sll_fo_after ) - static_cast<int64_t>( rep.sll_fo_before ) == sum );
    REQUIRE( count_sll_fo( ntk, a ) == rep.sll_fo_after );

    auto again = original;
    auto b = dies;
    resynthesize( again, b, ps );
    REQUIRE( write_blif_string( again ) == write_blif_string( ntk ) );

    if ( ps.passes == 0u )
    {
      auto const second = resynthesize( ntk, a, ps );
      REQUIRE( second.commits == 0u );
    }
  }
  CHECK( total_commits > 0u );
}
