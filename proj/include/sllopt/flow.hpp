/*!
  \file flow.hpp
  \brief End-to-end driver: parse, partition, resynthesize, verify, split, report

  Artifacts written to the output directory:
    partition.txt            initial assignment
    partition_resynth.txt    assignment after resynthesis (new nodes included)
    resynth.blif             resynthesized netlist
    die_<d>.blif             per-die sub-netlists
    equiv.json               verdicts for resynthesis and split/stitch
    report.json, report.txt  metrics and the per-pivot audit trail

  Artifacts depend only on the inputs and flags; paths are reported by file
  name only.
*/

#pragma once

#include "blif.hpp"
#include "equiv.hpp"
#include "metrics.hpp"
#include "partition.hpp"
#include "report.hpp"
#include "resynth.hpp"
#include "split.hpp"

#include <filesystem>
#include <fstream>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace sllopt
{

/*! \brief Error raised inside a flow stage; the message starts with the stage name. */
class stage_error : public error
{
public:
  stage_error( std::string stage, std::string const& what )
      : error( "[" + stage + "] " + what ), stage_( std::move( stage ) )
  {
  }

  std::string const& stage() const { return stage_; }

private:
  std::string stage_;
};

struct flow_config
{
  std::string input;
  std::string out_dir;
  uint32_t k_max{ 6u };

  partition_params partition;
  std::string partition_file;

  resynth_params resynth;
  std::string care_file;

  equiv_mode verify_mode{ equiv_mode::automatic };
  uint64_t verify_vectors{ 100000u };

  sll_count_mode sll_mode{ sll_count_mode::per_destination_die };

  std::string placement_file;
  double die_width{ 100.0 };
  double die_height{ 100.0 };
  double l_sll{ 10.0 };
  std::string q_table_file;
  std::string delay_table_file;
};

struct flow_result
{
  partition_stats partition;
  resynth_report resynth;
  metrics_report metrics;
  equiv_verdict verdict;
  equiv_verdict split_verdict;
  std::vector<std::string> artifacts;

  bool verified() const { return verdict.equivalent() && split_verdict.equivalent(); }
};

inline std::string_view to_string( partition_mode m )
{
  switch ( m )
  {
  case partition_mode::fm_mincut:
    return "fm";
  case partition_mode::hash_label:
    return "hash";
  default:
    return "file";
  }
}

inline std::string_view to_string( equiv_mode m )
{
  switch ( m )
  {
  case equiv_mode::exhaustive:
    return "exhaustive";
  case equiv_mode::random:
    return "random";
  default:
    return "auto";
  }
}

inline json to_json( equiv_verdict const& v )
{
  json j;
  j["equivalent"] = v.equivalent();
  j["mode"] = to_string( v.mode );
  j["vectors_checked"] = v.vectors_checked;
  if ( v.cex )
  {
    json in = json::object();
    for ( auto const& [name, bit] : v.cex->inputs )
      in[name] = bit ? 1 : 0;
    j["counterexample"] = { { "inputs", in }, { "output", v.cex->output } };
  }
  else
    j["counterexample"] = nullptr;
  return j;
}

namespace detail
{

template<typename Fn>
auto run_stage( std::string const& stage, Fn&& fn ) -> decltype( fn() )
{
  try
  {
    return fn();
  }
  catch ( stage_error const& )
  {
    throw;
  }
  catch ( std::exception const& e )
  {
    throw stage_error( stage, e.what() );
  }
}

inline void write_text( std::filesystem::path const& path, std::string const& text )
{
  std::ofstream out( path, std::ios::binary );
  if ( !out )
    throw error( "cannot write '" + path.string() + "'" );
  out << text;
}

} /* namespace detail */

inline json config_to_json( flow_config const& c )
{
  json j;
  j["input"] = std::filesystem::path( c.input ).filename().string();
  j["k_max"] = c.k_max;
  j["partition_mode"] = to_string( c.partition.mode );
  j["dies"] = c.partition.num_dies;
  j["ub"] = c.partition.imbalance_upper_bound;
  j["seed"] = c.partition.seed;
  j["d1"] = c.resynth.d1;
  j["d2"] = c.resynth.d2;
  j["passes"] = c.resynth.passes;
  j["window_pi_cap"] = c.resynth.window_pi_cap;
  j["divisor_cap"] = c.resynth.divisor_cap;
  j["max_augment"] = c.resynth.max_augment;
  j["freeze_die"] = c.resynth.freeze_die ? json( *c.resynth.freeze_die ) : json( nullptr );
  j["care"] = c.care_file.empty() ? json( nullptr ) : json( std::filesystem::path( c.care_file ).filename().string() );
  j["verify_mode"] = to_string( c.verify_mode );
  j["sll_count"] = to_string( c.sll_mode );
  return j;
}

/*! \brief Runs all stages; throws `stage_error` on failure.  A failed verification is reported, not thrown. */
inline flow_result run_flow( flow_config const& cfg )
{
  namespace fs = std::filesystem;
  flow_result res;

  auto const original = detail::run_stage( "parse", [&] {
    if ( !fs::exists( cfg.input ) )
      throw error( "input file '" + cfg.input + "' does not exist" );
    blif_read_params rp;
    rp.k_max = cfg.k_max;
    return read_blif_file( cfg.input, rp );
  } );

  fs::path const out = cfg.out_dir;
  detail::run_stage( "output", [&] {
    fs::create_directories( out );
    return 0;
  } );
  auto emit = [&]( std::string const& name, std::string const& text ) {
    detail::run_stage( "output", [&] {
      detail::write_text( out / name, text );
      return 0;
    } );
    res.artifacts.push_back( name );
  };

  auto const initial = detail::run_stage( "partition", [&] {
    if ( cfg.partition.mode == partition_mode::external_file )
    {
      if ( cfg.partition_file.empty() )
        throw error( "partition mode 'file' needs a partition file" );
      auto k = cfg.partition.num_dies ? cfg.partition.num_dies : count_dies_in_file( cfg.partition_file );
      return load_assignment( original, cfg.partition_file, k );
    }
    return partition( original, cfg.partition, &res.partition );
  } );
  {
    std::ostringstream ss;
    write_assignment( original, initial, ss );
    emit( "partition.txt", ss.str() );
  }

  std::optional<care_predicate> predicate;
  if ( !cfg.care_file.empty() )
    predicate = detail::run_stage( "care", [&] {
      care_predicate p{ read_blif_file( cfg.care_file ) };
      if ( simulation_interface( p.circuit ).outputs.size() != 1u )
        throw error( "care predicate must have exactly one output" );
      return p;
    } );
  care_predicate const* care = predicate ? &*predicate : nullptr;

  netlist ntk = original;
  die_assignment a = initial;
  res.resynth = detail::run_stage( "resynth", [&] { return resynthesize( ntk, a, cfg.resynth, care ); } );
  emit( "resynth.blif", write_blif_string( ntk ) );
  {
    std::ostringstream ss;
    write_assignment( ntk, a, ss );
    emit( "partition_resynth.txt", ss.str() );
  }

  equiv_params ep;
  ep.mode = cfg.verify_mode;
  ep.random_vectors = cfg.verify_vectors;
  ep.seed = cfg.partition.seed;
  ep.care = care;
  res.verdict = detail::run_stage( "verify", [&] { return check_equivalence( original, ntk, ep ); } );

  auto const dies = detail::run_stage( "split", [&] { return split_per_die( ntk, a ); } );
  for ( std::size_t d = 0; d < dies.size(); ++d )
    emit( "die_" + std::to_string( d ) + ".blif", write_blif_string( dies[d] ) );
  res.split_verdict = detail::run_stage( "split", [&] {
    auto const stitched = stitch( dies, ntk.model_name() );
    equiv_params sp = ep;
    sp.care = nullptr;
    return check_equivalence( ntk, stitched, sp );
  } );
  {
    json j;
    j["resynthesis"] = to_json( res.verdict );
    j["split_stitch"] = to_json( res.split_verdict );
    j["care_restricted"] = care != nullptr;
    emit( "equiv.json", j.dump( 2 ) + "\n" );
  }

  res.metrics = detail::run_stage( "metrics", [&] {
    metrics_report m;
    m.mode = cfg.sll_mode;
    std::optional<placement> pl;
    if ( !cfg.placement_file.empty() )
    {
      pl = load_placement( cfg.placement_file, cfg.die_width, cfg.die_height, cfg.l_sll );
      if ( !cfg.q_table_file.empty() )
      {
        std::ifstream qin( cfg.q_table_file );
        if ( !qin )
          throw error( "cannot open '" + cfg.q_table_file + "'" );
        pl->q_table = read_q_table( qin );
      }
    }
    m.before = take_snapshot( original, initial, cfg.sll_mode );
    m.after = take_snapshot( ntk, a, cfg.sll_mode, pl ? &*pl : nullptr );
    if ( pl )
    {
      /* the placement may describe only the resynthesized netlist */
      try
      {
        m.before = take_snapshot( original, initial, cfg.sll_mode, &*pl );
      }
      catch ( error const& )
      {
      }
    }
    if ( !cfg.delay_table_file.empty() )
      m.sll_link_delay_ps = load_sll_link_delay( cfg.delay_table_file );
    return m;
  } );

  json report;
  report["config"] = config_to_json( cfg );
  {
    json p;
    p["dies"] = initial.num_dies;
    p["hyperedge_cut"] = hyperedge_cut( original, initial );
    p["bound_relaxed"] = res.partition.bound_relaxed;
    p["die_loads_before"] = die_loads( initial );
    p["die_loads_after"] = die_loads( a );
    report["partition"] = p;
  }
  report["metrics"] = to_json( res.metrics );
  report["resynthesis"] = to_json( res.resynth );
  report["verified"] = res.verified();
  emit( "report.json", report.dump( 2 ) + "\n" );

  std::ostringstream txt;
  txt << "input: " << fs::path( cfg.input ).filename().string() << ", dies: " << initial.num_dies
      << ", partition: " << to_string( cfg.partition.mode ) << "\n\n";
  txt << to_text( res.metrics ) << '\n' << to_text( res.resynth ) << '\n';
  txt << "equivalence (" << to_string( res.verdict.mode ) << ", " << res.verdict.vectors_checked
      << " vectors): " << ( res.verdict.equivalent() ? "pass" : "FAIL" ) << '\n';
  txt << "split/stitch (" << to_string( res.split_verdict.mode ) << ", " << res.split_verdict.vectors_checked
      << " vectors): " << ( res.split_verdict.equivalent() ? "pass" : "FAIL" ) << '\n';
  emit( "report.txt", txt.str() );
  return res;
}

} /* namespace sllopt */
