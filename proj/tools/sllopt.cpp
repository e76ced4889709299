/* sllopt: command-line driver.  Exit codes: 0 success, 1 verification failure, 2 error. */

#include <sllopt/blif.hpp>
#include <sllopt/equiv.hpp>
#include <sllopt/flow.hpp>
#include <sllopt/metrics.hpp>
#include <sllopt/partition.hpp>
#include <sllopt/report.hpp>
#include <sllopt/resynth.hpp>
#include <sllopt/split.hpp>

#include <CLI11.hpp>

#include <cctype>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>

using namespace sllopt;

namespace
{

constexpr int exit_ok = 0;
constexpr int exit_mismatch = 1;
constexpr int exit_error = 2;

struct common_options
{
  uint64_t seed{ 1u };
  uint32_t k_max{ 6u };
  bool verbose{ false };
};

struct partition_options
{
  uint32_t dies{ 2u };
  double ub{ 1.25 };
  std::string mode{ "fm" };
  std::string file;
};

struct metrics_options
{
  std::string sll_count{ "per-destination-die" };
  std::string placement;
  double die_width{ 100.0 };
  double die_height{ 100.0 };
  double lsll{ 10.0 };
  std::string q_table;
  std::string delay_table;
};

void add_common( CLI::App* app, common_options& c )
{
  app->add_option( "--seed", c.seed, "Random seed" );
  app->add_option( "--k-max", c.k_max, "Largest LUT input count accepted" )->check( CLI::Range( 1u, 16u ) );
  app->add_flag( "--verbose,-v", c.verbose, "Print progress to stderr" );
}

void add_partition( CLI::App* app, partition_options& p )
{
  app->add_option( "--dies", p.dies, "Number of dies K" )->check( CLI::Range( 1u, 64u ) );
  app->add_option( "--ub", p.ub, "Imbalance upper bound" );
  app->add_option( "--partition-mode", p.mode, "fm, hash or file" )
      ->check( CLI::IsMember( { "fm", "hash", "file" } ) );
  app->add_option( "--partition-file", p.file, "Assignment file for --partition-mode file" );
}

void add_resynth( CLI::App* app, resynth_params& r, std::optional<uint32_t>& freeze, std::string& care )
{
  app->add_option( "--d1", r.d1, "Fanout depth of the window" );
  app->add_option( "--d2", r.d2, "Fanin depth of the window" )->check( CLI::PositiveNumber );
  app->add_option( "--passes", r.passes, "Sweeps over the netlist (0 = until no commit)" );
  app->add_option( "--window-pi-cap", r.window_pi_cap, "Largest window input count" )->check( CLI::Range( 1u, 20u ) );
  app->add_option( "--divisor-cap", r.divisor_cap, "Largest divisor count" )->check( CLI::PositiveNumber );
  app->add_option( "--max-augment", r.max_augment, "Augmenting divisors tried per candidate" )
      ->check( CLI::PositiveNumber );
  app->add_option( "--freeze-die", freeze, "Only resynthesize pivots on this die" );
  app->add_option( "--inject-care", care, "Care predicate: single-output BLIF over primary inputs" );
}

void add_metrics( CLI::App* app, metrics_options& m )
{
  app->add_option( "--sll-count", m.sll_count, "per-destination-die or raw-net" )
      ->check( CLI::IsMember( { "per-destination-die", "raw-net" } ) );
  app->add_option( "--placement", m.placement, "Placement file: <block> <x> <y> <die>" );
  app->add_option( "--die-width", m.die_width, "Die width in tiles" );
  app->add_option( "--die-height", m.die_height, "Die height in tiles" );
  app->add_option( "--lsll", m.lsll, "Interposer link length in tiles" );
  app->add_option( "--q-table", m.q_table, "Terminal-count weight table: <terminals> <factor>" );
  app->add_option( "--delay-table", m.delay_table, "Wire delay table (JSON) for report annotation" );
}

/* every long option of every subcommand can be set through SLLOPT_<NAME> */
void add_env_overrides( CLI::App& app )
{
  for ( auto* sub : app.get_subcommands( []( CLI::App* ) { return true; } ) )
    for ( auto* opt : sub->get_options() )
    {
      auto const& names = opt->get_lnames();
      if ( names.empty() || names[0] == "help" )
        continue;
      std::string env = "SLLOPT_";
      for ( char c : names[0] )
        env += c == '-' ? '_' : static_cast<char>( std::toupper( static_cast<unsigned char>( c ) ) );
      opt->envname( env );
    }
}

partition_mode parse_partition_mode( std::string const& s )
{
  return s == "hash" ? partition_mode::hash_label : s == "file" ? partition_mode::external_file : partition_mode::fm_mincut;
}

sll_count_mode parse_sll_mode( std::string const& s )
{
  return s == "raw-net" ? sll_count_mode::raw_net : sll_count_mode::per_destination_die;
}

netlist read_input( std::string const& path, common_options const& c )
{
  if ( !std::filesystem::exists( path ) )
    throw error( "input file '" + path + "' does not exist" );
  blif_read_params rp;
  rp.k_max = c.k_max;
  return read_blif_file( path, rp );
}

die_assignment read_partition_file( netlist const& ntk, std::string const& path, uint32_t dies )
{
  return load_assignment( ntk, path, dies ? dies : count_dies_in_file( path ) );
}

void write_file( std::string const& path, std::string const& text )
{
  std::ofstream out( path, std::ios::binary );
  if ( !out )
    throw error( "cannot write '" + path + "'" );
  out << text;
}

std::optional<care_predicate> read_care( std::string const& path )
{
  if ( path.empty() )
    return std::nullopt;
  return care_predicate{ read_blif_file( path ) };
}

} // namespace

int main( int argc, char** argv )
{
  CLI::App app{ "Inter-die connection reduction for partitioned LUT netlists" };
  app.require_subcommand( 1 );

  /* partition */
  common_options pc;
  partition_options pp;
  std::string p_in, p_out;
  auto* cmd_partition = app.add_subcommand( "partition", "Assign LUTs to dies" );
  cmd_partition->add_option( "--in", p_in, "Input BLIF" )->required();
  cmd_partition->add_option( "--out", p_out, "Assignment file to write (stdout if omitted)" );
  add_common( cmd_partition, pc );
  add_partition( cmd_partition, pp );

  /* resynth */
  common_options rc;
  resynth_params rp;
  std::optional<uint32_t> r_freeze;
  std::string r_in, r_part, r_out, r_report, r_part_out, r_care;
  uint32_t r_dies = 0;
  auto* cmd_resynth = app.add_subcommand( "resynth", "Eliminate cross-die fanins by resubstitution" );
  cmd_resynth->add_option( "--in", r_in, "Input BLIF" )->required();
  cmd_resynth->add_option( "--partition", r_part, "Assignment file" )->required();
  cmd_resynth->add_option( "--dies", r_dies, "Number of dies (default: from the assignment file)" );
  cmd_resynth->add_option( "--out", r_out, "Output BLIF" )->required();
  cmd_resynth->add_option( "--report", r_report, "Report file (JSON)" );
  cmd_resynth->add_option( "--partition-out", r_part_out, "Assignment after resynthesis" );
  add_common( cmd_resynth, rc );
  add_resynth( cmd_resynth, rp, r_freeze, r_care );

  /* equiv */
  common_options ec;
  std::string e_a, e_b, e_care, e_report;
  bool e_exhaustive = false;
  std::optional<uint64_t> e_random;
  auto* cmd_equiv = app.add_subcommand( "equiv", "Check functional equivalence" );
  cmd_equiv->add_option( "a", e_a, "First BLIF" )->required();
  cmd_equiv->add_option( "b", e_b, "Second BLIF" )->required();
  auto* ex = cmd_equiv->add_flag( "--exhaustive", e_exhaustive, "Enumerate all input assignments" );
  cmd_equiv->add_option( "--random", e_random, "Number of random vectors" )->excludes( ex );
  cmd_equiv->add_option( "--care", e_care, "Only compare where this single-output BLIF is 1" );
  cmd_equiv->add_option( "--report", e_report, "Verdict file (JSON)" );
  add_common( cmd_equiv, ec );

  /* metrics */
  common_options mc;
  metrics_options mo;
  std::string m_in, m_part, m_base, m_base_part, m_report, m_text;
  uint32_t m_dies = 0;
  auto* cmd_metrics = app.add_subcommand( "metrics", "Report SLL counts, imbalance and wirelength" );
  cmd_metrics->add_option( "--in", m_in, "BLIF to evaluate" )->required();
  cmd_metrics->add_option( "--partition", m_part, "Assignment file" )->required();
  cmd_metrics->add_option( "--dies", m_dies, "Number of dies (default: from the assignment file)" );
  cmd_metrics->add_option( "--baseline", m_base, "Baseline BLIF for deltas" );
  cmd_metrics->add_option( "--baseline-partition", m_base_part, "Baseline assignment file" );
  cmd_metrics->add_option( "--report", m_report, "Report file (JSON)" );
  cmd_metrics->add_option( "--text", m_text, "Report file (text table)" );
  add_common( cmd_metrics, mc );
  add_metrics( cmd_metrics, mo );

  /* split */
  common_options sc;
  std::string s_in, s_part, s_dir;
  uint32_t s_dies = 0;
  auto* cmd_split = app.add_subcommand( "split", "Write one BLIF per die" );
  cmd_split->add_option( "--in", s_in, "Input BLIF" )->required();
  cmd_split->add_option( "--partition", s_part, "Assignment file" )->required();
  cmd_split->add_option( "--dies", s_dies, "Number of dies (default: from the assignment file)" );
  cmd_split->add_option( "--out-dir", s_dir, "Output directory" )->required();
  add_common( cmd_split, sc );

  /* flow */
  common_options fc;
  partition_options fp;
  flow_config cfg;
  metrics_options fm;
  std::optional<uint32_t> f_freeze;
  std::string f_verify{ "auto" };
  auto* cmd_flow = app.add_subcommand( "flow", "Partition, resynthesize, verify, split and report" );
  cmd_flow->add_option( "--in", cfg.input, "Input BLIF" )->required();
  cmd_flow->add_option( "--out-dir", cfg.out_dir, "Output directory" )->required();
  cmd_flow->add_option( "--verify", f_verify, "auto, exhaustive or random" )
      ->check( CLI::IsMember( { "auto", "exhaustive", "random" } ) );
  cmd_flow->add_option( "--vectors", cfg.verify_vectors, "Random vectors for verification" );
  add_common( cmd_flow, fc );
  add_partition( cmd_flow, fp );
  add_resynth( cmd_flow, cfg.resynth, f_freeze, cfg.care_file );
  add_metrics( cmd_flow, fm );

  add_env_overrides( app );

  try
  {
    app.parse( argc, argv );
  }
  catch ( CLI::ParseError const& e )
  {
    auto const code = app.exit( e );
    return code == 0 ? exit_ok : exit_error;
  }

  try
  {
    if ( *cmd_partition )
    {
      auto const ntk = read_input( p_in, pc );
      partition_params ps;
      ps.num_dies = pp.dies;
      ps.imbalance_upper_bound = pp.ub;
      ps.seed = pc.seed;
      ps.mode = parse_partition_mode( pp.mode );
      if ( ps.mode == partition_mode::external_file )
        throw error( "the partition subcommand computes assignments; use fm or hash" );
      partition_stats st;
      auto const a = partition( ntk, ps, &st );
      if ( pc.verbose )
        std::cerr << "cut " << hyperedge_cut( ntk, a ) << ", imbalance " << imbalance( a )
                  << ( st.bound_relaxed ? " (bound relaxed)" : "" ) << '\n';
      if ( p_out.empty() )
        write_assignment( ntk, a, std::cout );
      else
        save_assignment( ntk, a, p_out );
      return exit_ok;
    }

    if ( *cmd_resynth )
    {
      auto const original = read_input( r_in, rc );
      auto ntk = original;
      auto a = read_partition_file( ntk, r_part, r_dies );
      rp.freeze_die = r_freeze;
      auto const care = read_care( r_care );
      auto const rep = resynthesize( ntk, a, rp, care ? &*care : nullptr );
      write_blif_file( ntk, r_out );
      if ( !r_part_out.empty() )
        save_assignment( ntk, a, r_part_out );
      if ( !r_report.empty() )
      {
        metrics_report m;
        m.before = take_snapshot( original, read_partition_file( original, r_part, a.num_dies ) );
        m.after = take_snapshot( ntk, a );
        json j;
        j["metrics"] = to_json( m );
        j["resynthesis"] = to_json( rep );
        write_file( r_report, j.dump( 2 ) + "\n" );
      }
      if ( rc.verbose )
        std::cerr << to_text( rep );
      return exit_ok;
    }

    if ( *cmd_equiv )
    {
      auto const a = read_input( e_a, ec );
      auto const b = read_input( e_b, ec );
      auto const care = read_care( e_care );
      equiv_params ps;
      ps.seed = ec.seed;
      ps.care = care ? &*care : nullptr;
      if ( e_exhaustive )
        ps.mode = equiv_mode::exhaustive;
      else if ( e_random )
      {
        ps.mode = equiv_mode::random;
        ps.random_vectors = *e_random;
      }
      auto const v = check_equivalence( a, b, ps );
      if ( !e_report.empty() )
        write_file( e_report, to_json( v ).dump( 2 ) + "\n" );
      std::cout << ( v.equivalent() ? "equivalent" : "NOT equivalent" ) << " (" << to_string( v.mode ) << ", "
                << v.vectors_checked << " vectors)\n";
      if ( v.cex )
      {
        std::cout << "counterexample, output " << v.cex->output << ":";
        for ( auto const& [name, bit] : v.cex->inputs )
          std::cout << ' ' << name << '=' << bit;
        std::cout << '\n';
      }
      return v.equivalent() ? exit_ok : exit_mismatch;
    }

    if ( *cmd_metrics )
    {
      auto const ntk = read_input( m_in, mc );
      auto const a = read_partition_file( ntk, m_part, m_dies );
      auto const mode = parse_sll_mode( mo.sll_count );
      std::optional<placement> pl;
      if ( !mo.placement.empty() )
      {
        pl = load_placement( mo.placement, mo.die_width, mo.die_height, mo.lsll );
        if ( !mo.q_table.empty() )
        {
          std::ifstream qin( mo.q_table );
          if ( !qin )
            throw error( "cannot open '" + mo.q_table + "'" );
          pl->q_table = read_q_table( qin );
        }
      }
      metrics_report m;
      m.mode = mode;
      m.after = take_snapshot( ntk, a, mode, pl ? &*pl : nullptr );
      m.before = m.after;
      if ( !m_base.empty() )
      {
        auto const base = read_input( m_base, mc );
        auto const base_a = read_partition_file( base, m_base_part.empty() ? m_part : m_base_part, a.num_dies );
        m.before = take_snapshot( base, base_a, mode );
        if ( pl )
          try
          {
            m.before = take_snapshot( base, base_a, mode, &*pl );
          }
          catch ( error const& )
          {
          }
      }
      if ( !mo.delay_table.empty() )
        m.sll_link_delay_ps = load_sll_link_delay( mo.delay_table );
      if ( !m_report.empty() )
        write_file( m_report, to_json( m ).dump( 2 ) + "\n" );
      if ( !m_text.empty() )
        write_file( m_text, to_text( m ) );
      std::cout << to_text( m );
      return exit_ok;
    }

    if ( *cmd_split )
    {
      auto const ntk = read_input( s_in, sc );
      auto const a = read_partition_file( ntk, s_part, s_dies );
      auto const dies = split_per_die( ntk, a );
      std::filesystem::create_directories( s_dir );
      for ( std::size_t d = 0; d < dies.size(); ++d )
        write_blif_file( dies[d], ( std::filesystem::path( s_dir ) / ( "die_" + std::to_string( d ) + ".blif" ) ).string() );
      return exit_ok;
    }

    if ( *cmd_flow )
    {
      cfg.k_max = fc.k_max;
      cfg.partition.num_dies = fp.dies;
      cfg.partition.imbalance_upper_bound = fp.ub;
      cfg.partition.seed = fc.seed;
      cfg.partition.mode = parse_partition_mode( fp.mode );
      cfg.partition_file = fp.file;
      if ( cfg.partition.mode == partition_mode::external_file && !cmd_flow->count( "--dies" ) )
        cfg.partition.num_dies = 0u;
      cfg.resynth.freeze_die = f_freeze;
      cfg.verify_mode = f_verify == "exhaustive" ? equiv_mode::exhaustive
                        : f_verify == "random"   ? equiv_mode::random
                                                 : equiv_mode::automatic;
      cfg.sll_mode = parse_sll_mode( fm.sll_count );
      cfg.placement_file = fm.placement;
      cfg.die_width = fm.die_width;
      cfg.die_height = fm.die_height;
      cfg.l_sll = fm.lsll;
      cfg.q_table_file = fm.q_table;
      cfg.delay_table_file = fm.delay_table;
      auto const res = run_flow( cfg );
      if ( fc.verbose )
        std::cerr << to_text( res.metrics );
      std::cout << "commits: " << res.resynth.commits << ", n_sll " << res.metrics.before.n_sll << " -> "
                << res.metrics.after.n_sll << ", n_sll_fo " << res.metrics.before.n_sll_fo << " -> "
                << res.metrics.after.n_sll_fo << ", verification " << ( res.verified() ? "pass" : "FAIL" ) << '\n';
      return res.verified() ? exit_ok : exit_mismatch;
    }
  }
  catch ( stage_error const& e )
  {
    std::cerr << "error: " << e.what() << '\n';
    return exit_error;
  }
  catch ( std::exception const& e )
  {
    std::cerr << "error: " << e.what() << '\n';
    return exit_error;
  }
  return exit_error;
}
