/*!
  \file netlist.hpp
  \brief LUT-level netlist

  A netlist is a DAG of k-input LUTs between primary inputs, primary
  outputs and latches.  Every net has exactly one driver, so a net and the
  node that drives it share one identifier and one name.  Latches are
  sequential boundaries: their outputs behave as extra inputs and their
  inputs as extra outputs for every combinational analysis.

  Node identifiers are dense and never reused.  Removing a node only marks
  it dead, so identifiers held by callers stay meaningful.
*/

#pragma once

#include "error.hpp"
#include "truth_table.hpp"

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace sllopt
{

using node_id = uint32_t;
inline constexpr node_id invalid_node = ~node_id{ 0 };

enum class node_kind : uint8_t
{
  primary_input,
  lut,
  latch
};

/* BLIF init codes 0..3 */
enum class latch_init : uint8_t
{
  zero = 0,
  one = 1,
  dont_care = 2,
  unknown = 3
};

struct latch_info
{
  node_id input{ invalid_node };
  latch_init init{ latch_init::unknown };
  std::string type;
  std::string control;
};

struct node
{
  std::string name;
  node_kind kind{ node_kind::lut };
  std::vector<node_id> fanins;
  truth_table function;
  latch_info latch;
  bool alive{ true };
};

class netlist
{
public:
  explicit netlist( std::string model_name = "top", uint32_t k_max = 6u )
      : model_name_( std::move( model_name ) ), k_max_( k_max )
  {
  }

  /* construction */

  node_id add_pi( std::string name )
  {
    auto const id = create( std::move( name ), node_kind::primary_input );
    pis_.push_back( id );
    return id;
  }

  node_id add_lut( std::string name, std::vector<node_id> fanins, truth_table function )
  {
    auto const id = create( std::move( name ), node_kind::lut );
    set_function( id, std::move( fanins ), std::move( function ) );
    return id;
  }

  /*! \brief Adds a latch; its input may be connected later via `set_latch_input`. */
  node_id add_latch( std::string output_name, node_id input = invalid_node,
                     latch_init init = latch_init::unknown, std::string type = {}, std::string control = {} )
  {
    auto const id = create( std::move( output_name ), node_kind::latch );
    auto& l = nodes_[id].latch;
    l.init = init;
    l.type = std::move( type );
    l.control = std::move( control );
    latches_.push_back( id );
    if ( input != invalid_node )
      set_latch_input( id, input );
    return id;
  }

  void set_latch_input( node_id latch, node_id input )
  {
    auto& l = nodes_.at( latch ).latch;
    if ( l.input != invalid_node )
      erase_fanout( l.input, latch );
    l.input = input;
    fanouts_.at( input ).push_back( latch );
  }

  /*! \brief Replaces fanins and function of a LUT, keeping fanout lists consistent. */
  void set_function( node_id id, std::vector<node_id> fanins, truth_table function )
  {
    auto& n = nodes_.at( id );
    if ( n.kind != node_kind::lut )
      throw structure_error( "node '" + n.name + "' is not a LUT" );
    if ( function.num_vars() != fanins.size() )
      throw structure_error( "function of '" + n.name + "' has " + std::to_string( function.num_vars() ) +
                             " variables but " + std::to_string( fanins.size() ) + " fanins" );
    for ( std::size_t i = 0; i < fanins.size(); ++i )
    {
      if ( fanins[i] >= nodes_.size() || !nodes_[fanins[i]].alive )
        throw structure_error( "fanin of '" + n.name + "' does not exist" );
      for ( std::size_t j = 0; j < i; ++j )
        if ( fanins[i] == fanins[j] )
          throw structure_error( "duplicate fanin '" + nodes_[fanins[i]].name + "' on '" + n.name + "'" );
    }
    for ( auto f : n.fanins )
      erase_fanout( f, id );
    n.fanins = std::move( fanins );
    n.function = std::move( function );
    for ( auto f : n.fanins )
      fanouts_[f].push_back( id );
  }

  void add_po( node_id driver )
  {
    auto const& n = nodes_.at( driver );
    if ( po_refs_[driver] > 0u )
      throw structure_error( "primary output '" + n.name + "' declared twice" );
    pos_.push_back( driver );
    ++po_refs_[driver];
  }

  /* access */

  std::string const& model_name() const { return model_name_; }
  void set_model_name( std::string name ) { model_name_ = std::move( name ); }
  uint32_t k_max() const { return k_max_; }
  void set_k_max( uint32_t k ) { k_max_ = k; }

  /*! \brief Size of the identifier space, dead nodes included. */
  std::size_t size() const { return nodes_.size(); }

  node const& get( node_id id ) const { return nodes_.at( id ); }
  std::string const& name( node_id id ) const { return nodes_.at( id ).name; }
  node_kind kind( node_id id ) const { return nodes_.at( id ).kind; }
  bool is_alive( node_id id ) const { return id < nodes_.size() && nodes_[id].alive; }
  bool is_lut( node_id id ) const { return is_alive( id ) && nodes_[id].kind == node_kind::lut; }
  bool is_pi( node_id id ) const { return is_alive( id ) && nodes_[id].kind == node_kind::primary_input; }
  bool is_latch( node_id id ) const { return is_alive( id ) && nodes_[id].kind == node_kind::latch; }

  /*! \brief Combinational source: primary input or latch output. */
  bool is_source( node_id id ) const { return is_alive( id ) && nodes_[id].kind != node_kind::lut; }

  std::vector<node_id> const& pis() const { return pis_; }
  std::vector<node_id> const& pos() const { return pos_; }
  std::vector<node_id> const& latches() const { return latches_; }

  /*! \brief LUT and latch sinks of the net driven by `id`. */
  std::vector<node_id> const& fanouts( node_id id ) const { return fanouts_.at( id ); }

  uint32_t po_refs( node_id id ) const { return po_refs_.at( id ); }
  bool is_po( node_id id ) const { return po_refs_.at( id ) > 0u; }

  /*! \brief True iff the net feeds a latch input (a pseudo primary output). */
  bool feeds_latch( node_id id ) const
  {
    for ( auto s : fanouts_.at( id ) )
      if ( nodes_[s].kind == node_kind::latch )
        return true;
    return false;
  }

  std::optional<node_id> find( std::string_view name ) const
  {
    auto it = by_name_.find( std::string( name ) );
    if ( it == by_name_.end() )
      return std::nullopt;
    return it->second;
  }

  node_id at( std::string_view name ) const
  {
    auto id = find( name );
    if ( !id )
      throw structure_error( "unknown net '" + std::string( name ) + "'" );
    return *id;
  }

  std::size_t num_luts() const { return num_luts_; }
  std::size_t num_latches() const { return latches_.size(); }

  template<class Fn>
  void foreach_lut( Fn&& fn ) const
  {
    for ( node_id id = 0; id < nodes_.size(); ++id )
      if ( nodes_[id].alive && nodes_[id].kind == node_kind::lut )
        fn( id );
  }

  template<class Fn>
  void foreach_node( Fn&& fn ) const
  {
    for ( node_id id = 0; id < nodes_.size(); ++id )
      if ( nodes_[id].alive )
        fn( id );
  }

  std::size_t num_edges() const
  {
    std::size_t n = 0;
    foreach_lut( [&]( node_id id ) { n += nodes_[id].fanins.size(); } );
    return n + latches_.size();
  }

  /* mutation */

  /*! \brief Creates a LUT that takes over every sink of `old`, and kills `old`.
   *
   * The new node inherits the name of `old`, so primary outputs and external
   * references keep their meaning.  Returns the identifier of the new node.
   * The caller is responsible for acyclicity.
   */
  node_id substitute( node_id old, std::vector<node_id> fanins, truth_table function )
  {
    if ( !is_lut( old ) )
      throw structure_error( "only live LUTs can be substituted" );
    auto name = nodes_[old].name;
    auto const id = create_unnamed( node_kind::lut );
    set_function( id, std::move( fanins ), std::move( function ) );

    auto sinks = fanouts_[old];
    for ( auto s : sinks )
    {
      auto& sn = nodes_[s];
      if ( sn.kind == node_kind::latch )
      {
        sn.latch.input = id;
      }
      else
      {
        std::replace( sn.fanins.begin(), sn.fanins.end(), old, id );
      }
      fanouts_[id].push_back( s );
    }
    fanouts_[old].clear();
    for ( auto& po : pos_ )
      if ( po == old )
        po = id;
    po_refs_[id] = po_refs_[old];
    po_refs_[old] = 0u;

    kill( old );
    nodes_[id].name = name;
    by_name_[name] = id;
    return id;
  }

  /*! \brief Removes a LUT that has no sinks and no primary-output reference. */
  void remove_lut( node_id id )
  {
    if ( !is_lut( id ) )
      throw structure_error( "only live LUTs can be removed" );
    if ( !fanouts_[id].empty() || po_refs_[id] > 0u )
      throw structure_error( "cannot remove referenced node '" + nodes_[id].name + "'" );
    kill( id );
  }

  /*! \brief Removes `root` if unreferenced, then every LUT left without references.
   *
   * Returns the removed nodes in removal order.
   */
  std::vector<node_id> remove_dangling_cone( node_id root )
  {
    std::vector<node_id> removed;
    std::vector<node_id> stack{ root };
    while ( !stack.empty() )
    {
      auto const id = stack.back();
      stack.pop_back();
      if ( !is_lut( id ) || !fanouts_[id].empty() || po_refs_[id] > 0u )
        continue;
      auto const fanins = nodes_[id].fanins;
      kill( id );
      removed.push_back( id );
      for ( auto it = fanins.rbegin(); it != fanins.rend(); ++it )
        stack.push_back( *it );
    }
    return removed;
  }

  /*! \brief Removes every LUT that reaches no output; returns the count. */
  std::size_t sweep_dangling()
  {
    std::size_t count = 0;
    for ( node_id id = 0; id < nodes_.size(); ++id )
      if ( is_lut( id ) && fanouts_[id].empty() && po_refs_[id] == 0u )
        count += remove_dangling_cone( id ).size();
    return count;
  }

private:
  node_id create( std::string name, node_kind kind )
  {
    if ( by_name_.contains( name ) )
      throw structure_error( "net '" + name + "' has multiple drivers" );
    auto const id = create_unnamed( kind );
    nodes_[id].name = name;
    by_name_.emplace( std::move( name ), id );
    return id;
  }

  node_id create_unnamed( node_kind kind )
  {
    auto const id = static_cast<node_id>( nodes_.size() );
    nodes_.emplace_back();
    nodes_.back().kind = kind;
    fanouts_.emplace_back();
    po_refs_.push_back( 0u );
    if ( kind == node_kind::lut )
      ++num_luts_;
    return id;
  }

  void kill( node_id id )
  {
    auto& n = nodes_[id];
    for ( auto f : n.fanins )
      erase_fanout( f, id );
    if ( n.kind == node_kind::lut )
      --num_luts_;
    n.alive = false;
    auto it = by_name_.find( n.name );
    if ( it != by_name_.end() && it->second == id )
      by_name_.erase( it );
  }

  void erase_fanout( node_id driver, node_id sink )
  {
    auto& fo = fanouts_[driver];
    auto it = std::find( fo.begin(), fo.end(), sink );
    if ( it != fo.end() )
      fo.erase( it );
  }

  std::string model_name_;
  uint32_t k_max_;
  std::vector<node> nodes_;
  std::vector<std::vector<node_id>> fanouts_;
  std::vector<uint32_t> po_refs_;
  std::vector<node_id> pis_;
  std::vector<node_id> pos_;
  std::vector<node_id> latches_;
  std::unordered_map<std::string, node_id> by_name_;
  std::size_t num_luts_{ 0 };
};

} /* namespace sllopt */
