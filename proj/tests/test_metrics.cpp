#include <catch_amalgamated.hpp>

#include "common.hpp"

#include <sllopt/metrics.hpp>
#include <sllopt/report.hpp>

#include <random>
#include <set>
#include <sstream>

using namespace sllopt;
using namespace sllopt::test;
using Catch::Matchers::ContainsSubstring;

namespace
{

/* counted from the sink side: every LUT fanin and latch input whose die differs */
uint64_t brute_force_fo( netlist const& ntk, die_assignment const& a )
{
  uint64_t n = 0;
  for ( node_id id = 0; id < ntk.size(); ++id )
  {
    if ( !ntk.is_alive( id ) )
      continue;
    if ( ntk.is_lut( id ) )
      for ( auto f : ntk.get( id ).fanins )
        n += a.die( f ) != a.die( id ) ? 1u : 0u;
    if ( ntk.is_latch( id ) )
      n += a.die( ntk.get( id ).latch.input ) != a.die( id ) ? 1u : 0u;
  }
  return n;
}

placement random_placement( netlist const& ntk, die_assignment const& a, std::mt19937_64& rng, double w, double h )
{
  placement p;
  p.die_width = w;
  p.die_height = h;
  p.l_sll = 10.0;
  std::uniform_real_distribution<double> x( 0.0, w ), y( 0.0, h );
  ntk.foreach_node( [&]( node_id id ) { p.blocks[ntk.name( id )] = { x( rng ), y( rng ), a.die( id ) }; } );
  return p;
}

netlist example_after()
{
  auto ntk = worked_example();
  ntk.substitute( ntk.at( "F" ), { ntk.at( "Y" ), ntk.at( "d" ) }, xor2() );
  ntk.sweep_dangling();
  return ntk;
}

} // namespace

TEST_CASE( "worked example SLL counts", "[metrics]" )
{
  auto const before = worked_example();
  auto const after = example_after();
  CHECK( count_sll( before, worked_example_dies( before ) ) == 2u );
  CHECK( count_sll_fo( before, worked_example_dies( before ) ) == 2u );
  CHECK( count_sll( after, worked_example_dies( after ) ) == 1u );
  CHECK( count_sll_fo( after, worked_example_dies( after ) ) == 1u );

  die_assignment one;
  one.num_dies = 1;
  before.foreach_node( [&]( node_id id ) { one.set( id, 0u, logic_weight( before, id ) ); } );
  CHECK( count_sll( before, one ) == 0u );
  CHECK( count_sll_fo( before, one ) == 0u );
}

TEST_CASE( "one net with three sinks on another die", "[metrics]" )
{
  netlist ntk;
  auto const p = ntk.add_pi( "p" );
  auto const u = ntk.add_lut( "u", { p }, truth_table::nth_var( 1, 0 ) );
  for ( int i = 0; i < 3; ++i )
    ntk.add_po( ntk.add_lut( "v" + std::to_string( i ), { u }, truth_table::nth_var( 1, 0 ) ) );
  die_assignment a;
  a.num_dies = 3;
  ntk.foreach_node( [&]( node_id id ) { a.set( id, id <= u ? 0u : 1u, logic_weight( ntk, id ) ); } );
  CHECK( count_sll( ntk, a ) == 1u );
  CHECK( count_sll_fo( ntk, a ) == 3u );
  CHECK( count_sll( ntk, a, sll_count_mode::raw_net ) == 1u );

  /* one sink moved to a third die: one channel per destination die */
  a.set( ntk.at( "v2" ), 2u, 1u );
  CHECK( count_sll( ntk, a ) == 2u );
  CHECK( count_sll( ntk, a, sll_count_mode::raw_net ) == 1u );
  CHECK( count_sll_fo( ntk, a ) == 3u );
}

TEST_CASE( "SLL edge count equals a brute-force scan", "[metrics][property]" )
{
  std::mt19937_64 rng( 31 );
  for ( int round = 0; round < 100; ++round )
  {
    auto const ntk = random_netlist( rng, { 8, 20 + static_cast<uint32_t>( round ) * 2, 4, 4,
                                            static_cast<uint32_t>( round % 3 ) } );
    REQUIRE( ntk.num_edges() <= 1000u );
    auto const a = random_assignment( ntk, rng, 2 + round % 3 );
    REQUIRE( count_sll_fo( ntk, a ) == brute_force_fo( ntk, a ) );
    REQUIRE( count_sll( ntk, a ) <= count_sll_fo( ntk, a ) );
    REQUIRE( count_sll( ntk, a, sll_count_mode::raw_net ) <= count_sll( ntk, a ) );
  }
}

TEST_CASE( "HPWL hand values", "[metrics]" )
{
  CHECK( hpwl( { { 0, 0 }, { 3, 4 } } ) == 7.0 );
  CHECK( hpwl( { { 0, 0 }, { 2, 1 }, { 1, 5 } } ) == 7.0 );
  CHECK( hpwl( { { 1, 1 } } ) == 0.0 );
  CHECK( hpwl( {} ) == 0.0 );
}

TEST_CASE( "HPWL is translation invariant and monotone under inclusion", "[metrics][property]" )
{
  std::mt19937_64 rng( 9 );
  std::uniform_real_distribution<double> u( -50.0, 50.0 );
  for ( int round = 0; round < 200; ++round )
  {
    std::vector<point> pts( 2 + rng() % 8 );
    for ( auto& p : pts )
      p = { u( rng ), u( rng ) };
    auto const dx = u( rng ), dy = u( rng );
    auto moved = pts;
    for ( auto& p : moved )
      p = { p.x + dx, p.y + dy };
    REQUIRE( hpwl( moved ) == Catch::Approx( hpwl( pts ) ).epsilon( 1e-12 ) );
    auto more = pts;
    more.push_back( { u( rng ), u( rng ) } );
    REQUIRE( hpwl( more ) >= hpwl( pts ) );
  }
}

TEST_CASE( "single-die costs", "[metrics]" )
{
  netlist ntk;
  auto const a = ntk.add_pi( "a" );
  auto const b = ntk.add_pi( "b" );
  ntk.add_po( ntk.add_lut( "y", { a, b }, xor2() ) );
  std::istringstream in( "a 0 0 0\nb 2 1 0\ny 1 5 0\n" );
  auto const p = read_placement( in, 10, 10, 5 );
  /* nets a->y and b->y */
  CHECK( bbox_cost_sd( ntk, p, 0 ) == ( 1.0 + 5.0 ) + ( 1.0 + 4.0 ) );
  CHECK( bbox_cost_sd( ntk, p, 1 ) == 0.0 );

  std::istringstream outside( "a 11 0 0\n" );
  CHECK_THROWS_WITH( read_placement( outside, 10, 10, 5 ), ContainsSubstring( "outside" ) );
  std::istringstream partial( "a 0 0 0\ny 1 5 0\n" );
  CHECK_THROWS_WITH( bbox_cost_sd( ntk, read_placement( partial, 10, 10, 5 ), 0 ), ContainsSubstring( "'b'" ) );
  std::istringstream any( "a 0 0 0\n" );
  CHECK_THROWS( read_placement( any, 10, 10, 0 ) );
}

TEST_CASE( "cross-die net near the die boundary", "[metrics]" )
{
  netlist ntk;
  auto const p = ntk.add_pi( "p" );
  auto const u = ntk.add_lut( "u", { p }, truth_table::nth_var( 1, 0 ) );
  ntk.add_po( ntk.add_lut( "v", { u }, truth_table::nth_var( 1, 0 ) ) );
  die_assignment a;
  a.num_dies = 2;
  a.set( p, 0u, 0u );
  a.set( u, 0u, 1u );
  a.set( ntk.at( "v" ), 1u, 1u );
  std::istringstream in( "p 2 9 0\nu 2 9 0\nv 4 1 1\n" );
  auto const pl = read_placement( in, 10, 10, 10 );
  /* crossing column 2 (lower median of 2, 4): die 0 box (2,9)-(2,10) = 1, die 1 box (4,1)-(2,0) = 3 */
  auto const r = bbox_cost_md_breakdown( ntk, pl, a );
  CHECK( r.intra_die == 0.0 );
  CHECK( r.inter_die_local == 4.0 );
  CHECK( r.n_sll == 1u );
  CHECK( bbox_cost_md( ntk, pl, a ) == 14.0 );

  a.set( ntk.at( "v" ), 0u, 1u );
  CHECK_THROWS_WITH( bbox_cost_md( ntk, pl, a ), ContainsSubstring( "assigned to die 0" ) );
}

TEST_CASE( "multi-die cost collapses to the single-die cost for one die", "[metrics][property]" )
{
  std::mt19937_64 rng( 77 );
  for ( int round = 0; round < 50; ++round )
  {
    auto const ntk = random_netlist( rng, { 6, 40, 4, 4 } );
    auto const a = random_assignment( ntk, rng, 1 );
    auto const p = random_placement( ntk, a, rng, 30, 30 );
    auto const sd = bbox_cost_sd( ntk, p, 0 );
    REQUIRE( bbox_cost_md( ntk, p, a ) == Catch::Approx( sd ).epsilon( 1e-9 ) );
  }
}

TEST_CASE( "interposer length enters linearly", "[metrics][property]" )
{
  std::mt19937_64 rng( 78 );
  for ( int round = 0; round < 50; ++round )
  {
    auto const ntk = random_netlist( rng, { 6, 40, 4, 4 } );
    auto const a = random_assignment( ntk, rng, 2 + round % 3 );
    auto p = random_placement( ntk, a, rng, 30, 20 );
    auto const base = bbox_cost_md_breakdown( ntk, p, a );
    REQUIRE( base.n_sll == count_sll( ntk, a ) );
    p.l_sll *= 2.0;
    auto const doubled = bbox_cost_md( ntk, p, a );
    REQUIRE( doubled - base.total() == Catch::Approx( static_cast<double>( base.n_sll ) * p.l_sll / 2.0 ) );

    /* intra-die part equals the sum of single-die costs */
    double sum = 0.0;
    for ( uint32_t d = 0; d < a.num_dies; ++d )
      sum += bbox_cost_sd( ntk, p, d );
    REQUIRE( base.intra_die == Catch::Approx( sum ).epsilon( 1e-12 ) );
  }
}

TEST_CASE( "q table weights nets by terminal count", "[metrics]" )
{
  std::istringstream q( "# terminals factor\n3 2.5\n" );
  auto const table = read_q_table( q );
  netlist ntk;
  auto const a = ntk.add_pi( "a" );
  auto const b = ntk.add_pi( "b" );
  ntk.add_po( ntk.add_lut( "x", { a, b }, xor2() ) );
  ntk.add_po( ntk.add_lut( "y", { a }, truth_table::nth_var( 1, 0 ) ) );
  std::istringstream in( "a 0 0 0\nb 0 0 0\nx 1 0 0\ny 0 2 0\n" );
  auto p = read_placement( in, 5, 5, 1 );
  p.q_table = table;
  /* a: 3 terminals, hpwl 1 + 2; b: 2 terminals, hpwl 1 */
  CHECK( bbox_cost_sd( ntk, p, 0 ) == 2.5 * 3.0 + 1.0 );
}

TEST_CASE( "metric reports", "[metrics][report]" )
{
  auto const before = worked_example();
  auto const after = example_after();
  metrics_report r;
  r.before = take_snapshot( before, worked_example_dies( before ) );
  r.after = take_snapshot( after, worked_example_dies( after ) );
  auto const j = to_json( r );
  CHECK( j["n_sll"]["delta"] == -1 );
  CHECK( j["n_sll"]["delta_pct"].get<double>() == -50.0 );
  CHECK( j["n_sll_fo"]["after"] == 1 );
  CHECK( metrics_report_from_json( json::parse( j.dump() ) ) == r );
  CHECK( to_text( r ).find( "-50.00%" ) != std::string::npos );

  metrics_report same;
  same.before = r.before;
  same.after = r.before;
  auto const s = to_json( same );
  for ( auto const* key : { "n_sll", "n_sll_fo", "rho", "lut_count" } )
    CHECK( s[key]["delta"].get<double>() == 0.0 );

  r.sll_link_delay_ps = load_sll_link_delay( data_path( "wire_delays.json" ) );
  CHECK( *r.sll_link_delay_ps == 2223.7 );
  CHECK( metrics_report_from_json( json::parse( to_json( r ).dump() ) ) == r );
}
