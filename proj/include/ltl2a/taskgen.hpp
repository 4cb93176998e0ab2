#pragma once

/*!
  \file taskgen.hpp
  \brief Procedural task spaces: partially-ordered and avoidance formulas.

  Partially-ordered tasks are conjunctions of sequences

      sequence := F (term & sequence) | F term
      term     := p | p | q

  Avoidance tasks are conjunctions of sequences

      sequence := !p U (q & sequence) | !p U q

  with every proposition used at most once in the whole formula. Conjunction
  chains are right-associated in sampling order.
*/

#include <ltl2a/errors.hpp>
#include <ltl2a/formula.hpp>
#include <ltl2a/parse.hpp>
#include <ltl2a/rng.hpp>

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace ltl2a
{

struct int_range
{
  int min = 1;
  int max = 1;

  bool operator==( int_range const& ) const = default;
};

struct partially_ordered_params
{
  int_range conjuncts{ 1, 4 };
  int_range depth{ 1, 5 };
  double disjunction_prob = 0.25;
  vocabulary vocab;

  void validate() const
  {
    if ( conjuncts.min < 1 || conjuncts.min > conjuncts.max || depth.min < 1 || depth.min > depth.max )
      throw invalid_argument_error( "conjunct and depth ranges must satisfy 1 <= min <= max" );
    if ( !( disjunction_prob >= 0.0 && disjunction_prob <= 1.0 ) )
      throw invalid_argument_error( "disjunction probability must lie in [0, 1]" );
    if ( vocab.empty() )
      throw vocabulary_too_small_error( "partially-ordered tasks need at least one proposition" );
    if ( disjunction_prob > 0.0 && vocab.size() < 2 )
      throw vocabulary_too_small_error( "disjunctive terms need at least two propositions" );
  }
};

struct avoidance_params
{
  int_range conjuncts{ 1, 2 };
  int_range depth{ 1, 3 };
  vocabulary vocab;

  void validate() const
  {
    if ( conjuncts.min < 1 || conjuncts.min > conjuncts.max || depth.min < 1 || depth.min > depth.max )
      throw invalid_argument_error( "conjunct and depth ranges must satisfy 1 <= min <= max" );
    std::size_t const needed = 2u * static_cast<std::size_t>( conjuncts.max ) * static_cast<std::size_t>( depth.max );
    if ( vocab.size() < needed )
      throw vocabulary_too_small_error( "avoidance tasks with these parameters need " + std::to_string( needed ) +
                                        " propositions, vocabulary has " + std::to_string( vocab.size() ) );
  }
};

struct weighted_formula
{
  formula task;
  double weight = 1.0;
};

/* right-associated conjunction; `parts` must be nonempty */
inline formula conjunction( std::vector<formula> const& parts )
{
  formula f = parts.back();
  for ( std::size_t i = parts.size() - 1; i-- > 0; )
    f = formula::make_and( parts[i], f );
  return f;
}

/* one partially-ordered sequence from its terms, outermost first */
inline formula po_sequence( std::vector<formula> const& terms )
{
  formula f = formula::make_eventually( terms.back() );
  for ( std::size_t i = terms.size() - 1; i-- > 0; )
    f = formula::make_eventually( formula::make_and( terms[i], f ) );
  return f;
}

/* one avoidance sequence from (avoid, reach) pairs, outermost first */
inline formula avoidance_sequence( std::vector<std::pair<std::string, std::string>> const& steps )
{
  auto const link = []( auto const& step ) { return formula::make_not( formula::prop( step.first ) ); };
  formula f = formula::make_until( link( steps.back() ), formula::prop( steps.back().second ) );
  for ( std::size_t i = steps.size() - 1; i-- > 0; )
    f = formula::make_until( link( steps[i] ), formula::make_and( formula::prop( steps[i].second ), f ) );
  return f;
}

inline formula sample_partially_ordered( partially_ordered_params const& params, rng& r )
{
  params.validate();
  auto const& v = params.vocab;
  auto const k = r.between( params.conjuncts.min, params.conjuncts.max );
  std::vector<formula> sequences;
  for ( std::int64_t c = 0; c < k; ++c )
  {
    auto const d = r.between( params.depth.min, params.depth.max );
    std::vector<formula> terms;
    for ( std::int64_t i = 0; i < d; ++i )
    {
      if ( r.bernoulli( params.disjunction_prob ) )
      {
        auto const a = r.below( v.size() );
        auto b = r.below( v.size() - 1 );
        if ( b >= a )
          ++b;
        terms.push_back( formula::make_or( formula::prop( v[a] ), formula::prop( v[b] ) ) );
      }
      else
        terms.push_back( formula::prop( v[r.below( v.size() )] ) );
    }
    sequences.push_back( po_sequence( terms ) );
  }
  return conjunction( sequences );
}

inline formula sample_avoidance( avoidance_params const& params, rng& r )
{
  params.validate();
  auto const k = r.between( params.conjuncts.min, params.conjuncts.max );
  std::vector<std::int64_t> depths;
  for ( std::int64_t c = 0; c < k; ++c )
    depths.push_back( r.between( params.depth.min, params.depth.max ) );

  /* draw without replacement across the whole formula */
  std::vector<std::string> pool = params.vocab.names();
  std::size_t drawn = 0;
  auto const draw = [&]() {
    auto const j = drawn + r.below( pool.size() - drawn );
    std::swap( pool[drawn], pool[j] );
    return pool[drawn++];
  };

  std::vector<formula> sequences;
  for ( auto d : depths )
  {
    std::vector<std::pair<std::string, std::string>> steps;
    for ( std::int64_t i = 0; i < d; ++i )
    {
      auto avoid = draw();
      auto reach = draw();
      steps.emplace_back( std::move( avoid ), std::move( reach ) );
    }
    sequences.push_back( avoidance_sequence( steps ) );
  }
  return conjunction( sequences );
}

/*! \brief Shape of a recognized task: sequences of terms, each term a list of
    one or two propositions (disjuncts, or the avoid/reach pair). */
using task_shape = std::vector<std::vector<std::vector<std::string>>>;

namespace detail
{

inline void split_conjunction( formula const& f, std::vector<formula>& out )
{
  if ( f.kind() == op_kind::and_ )
  {
    out.push_back( f.left() );
    split_conjunction( f.right(), out );
  }
  else
    out.push_back( f );
}

inline std::optional<std::vector<std::string>> po_term( formula const& t )
{
  if ( t.kind() == op_kind::prop )
    return std::vector<std::string>{ t.name() };
  if ( t.kind() == op_kind::or_ && t.left().kind() == op_kind::prop && t.right().kind() == op_kind::prop &&
       t.left().name() != t.right().name() )
    return std::vector<std::string>{ t.left().name(), t.right().name() };
  return std::nullopt;
}

} // namespace detail

/* parses `f` as a partially-ordered task; nullopt when it does not match the grammar */
inline std::optional<task_shape> recognize_partially_ordered( formula const& f )
{
  std::vector<formula> parts;
  detail::split_conjunction( f, parts );
  task_shape shape;
  for ( auto const& seq : parts )
  {
    std::vector<std::vector<std::string>> terms;
    formula cur = seq;
    for ( ;; )
    {
      if ( cur.kind() != op_kind::eventually )
        return std::nullopt;
      auto const& body = cur.child();
      if ( auto t = detail::po_term( body ) )
      {
        terms.push_back( *t );
        break;
      }
      if ( body.kind() != op_kind::and_ )
        return std::nullopt;
      auto t = detail::po_term( body.left() );
      if ( !t )
        return std::nullopt;
      terms.push_back( *t );
      cur = body.right();
    }
    shape.push_back( std::move( terms ) );
  }
  return shape;
}

/* parses `f` as an avoidance task, including the distinct-proposition rule */
inline std::optional<task_shape> recognize_avoidance( formula const& f )
{
  std::vector<formula> parts;
  detail::split_conjunction( f, parts );
  task_shape shape;
  std::vector<std::string> used;
  auto const fresh = [&]( std::string const& p ) {
    if ( std::find( used.begin(), used.end(), p ) != used.end() )
      return false;
    used.push_back( p );
    return true;
  };
  for ( auto const& seq : parts )
  {
    std::vector<std::vector<std::string>> steps;
    formula cur = seq;
    for ( ;; )
    {
      if ( cur.kind() != op_kind::until || cur.left().kind() != op_kind::not_ ||
           cur.left().child().kind() != op_kind::prop )
        return std::nullopt;
      auto const& avoid = cur.left().child().name();
      auto const& rhs = cur.right();
      if ( rhs.kind() == op_kind::prop )
      {
        if ( !fresh( avoid ) || !fresh( rhs.name() ) )
          return std::nullopt;
        steps.push_back( { avoid, rhs.name() } );
        break;
      }
      if ( rhs.kind() != op_kind::and_ || rhs.left().kind() != op_kind::prop )
        return std::nullopt;
      if ( !fresh( avoid ) || !fresh( rhs.left().name() ) )
        return std::nullopt;
      steps.push_back( { avoid, rhs.left().name() } );
      cur = rhs.right();
    }
    shape.push_back( std::move( steps ) );
  }
  return shape;
}

/*! \brief A distribution over tasks: one of the two grammars or an explicit weighted list. */
class task_distribution
{
public:
  using explicit_list = std::vector<weighted_formula>;
  using kind_type = std::variant<partially_ordered_params, avoidance_params, explicit_list>;

  task_distribution( kind_type kind, std::uint64_t seed = default_seed ) : kind_( std::move( kind ) ), seed_( seed )
  {
    validate();
  }

  static task_distribution single( formula const& f, std::uint64_t seed = default_seed )
  {
    return task_distribution( explicit_list{ { f, 1.0 } }, seed );
  }

  kind_type const& kind() const noexcept { return kind_; }
  std::uint64_t seed() const noexcept { return seed_; }

  bool is_partially_ordered() const { return std::holds_alternative<partially_ordered_params>( kind_ ); }
  bool is_avoidance() const { return std::holds_alternative<avoidance_params>( kind_ ); }
  bool is_explicit() const { return std::holds_alternative<explicit_list>( kind_ ); }

  /* propositions the tasks range over */
  vocabulary vocab() const
  {
    if ( auto const* p = std::get_if<partially_ordered_params>( &kind_ ) )
      return p->vocab;
    if ( auto const* a = std::get_if<avoidance_params>( &kind_ ) )
      return a->vocab;
    vocabulary v;
    for ( auto const& w : std::get<explicit_list>( kind_ ) )
      for ( auto const& p : w.task.propositions() )
        v.add( p );
    return v;
  }

  formula sample( rng& r ) const
  {
    if ( auto const* p = std::get_if<partially_ordered_params>( &kind_ ) )
      return sample_partially_ordered( *p, r );
    if ( auto const* a = std::get_if<avoidance_params>( &kind_ ) )
      return sample_avoidance( *a, r );
    auto const& list = std::get<explicit_list>( kind_ );
    double total = 0.0;
    for ( auto const& w : list )
      total += w.weight;
    double x = r.uniform() * total;
    for ( auto const& w : list )
    {
      if ( x < w.weight )
        return w.task;
      x -= w.weight;
    }
    return list.back().task;
  }

  /* draw number `index`, reproducible independently of other draws */
  formula sample_at( std::uint64_t index ) const
  {
    auto r = rng::stream( seed_, index );
    return sample( r );
  }

private:
  void validate() const
  {
    if ( auto const* p = std::get_if<partially_ordered_params>( &kind_ ) )
      p->validate();
    else if ( auto const* a = std::get_if<avoidance_params>( &kind_ ) )
      a->validate();
    else
    {
      auto const& list = std::get<explicit_list>( kind_ );
      if ( list.empty() )
        throw invalid_argument_error( "explicit task list is empty" );
      for ( auto const& w : list )
        if ( !( w.weight > 0.0 ) || !std::isfinite( w.weight ) )
          throw invalid_argument_error( "task weights must be positive and finite" );
    }
  }

  kind_type kind_;
  std::uint64_t seed_;
};

/*! \brief Every formula the sampler can emit, with its exact sampling probability.

  Throws `cap_exceeded_error` when the support has more than `cap` members.
*/
inline std::vector<weighted_formula> enumerate_support( task_distribution const& dist, std::size_t cap = 100000 )
{
  std::vector<weighted_formula> out;
  auto const push = [&]( formula f, double p ) {
    if ( out.size() >= cap )
      throw cap_exceeded_error( "task support exceeds cap " + std::to_string( cap ), out.size() );
    out.push_back( { std::move( f ), p } );
  };

  if ( auto const* list = std::get_if<task_distribution::explicit_list>( &dist.kind() ) )
  {
    double total = 0.0;
    for ( auto const& w : *list )
      total += w.weight;
    for ( auto const& w : *list )
      push( w.task, w.weight / total );
    return out;
  }

  if ( auto const* a = std::get_if<avoidance_params>( &dist.kind() ) )
  {
    auto const& names = a->vocab.names();
    int const kc = a->conjuncts.max - a->conjuncts.min + 1;
    int const dc = a->depth.max - a->depth.min + 1;
    for ( int k = a->conjuncts.min; k <= a->conjuncts.max; ++k )
    {
      std::vector<int> depths( k, a->depth.min );
      for ( ;; )
      {
        int total = 0;
        for ( int d : depths )
          total += d;
        /* ordered draws without replacement of 2*total propositions */
        double p = 1.0 / kc / std::pow( double( dc ), k );
        for ( int i = 0; i < 2 * total; ++i )
          p /= double( names.size() - i );
        std::vector<std::size_t> pick;
        std::vector<bool> used( names.size(), false );
        auto const emit = [&]() {
          std::vector<formula> seqs;
          std::size_t at = 0;
          for ( int d : depths )
          {
            std::vector<std::pair<std::string, std::string>> steps;
            for ( int i = 0; i < d; ++i, at += 2 )
              steps.emplace_back( names[pick[at]], names[pick[at + 1]] );
            seqs.push_back( avoidance_sequence( steps ) );
          }
          push( conjunction( seqs ), p );
        };
        auto rec = [&]( auto&& self ) -> void {
          if ( pick.size() == std::size_t( 2 * total ) )
          {
            emit();
            return;
          }
          for ( std::size_t i = 0; i < names.size(); ++i )
          {
            if ( used[i] )
              continue;
            used[i] = true;
            pick.push_back( i );
            self( self );
            pick.pop_back();
            used[i] = false;
          }
        };
        rec( rec );

        int pos = k - 1;
        while ( pos >= 0 && depths[pos] == a->depth.max )
          depths[pos--] = a->depth.min;
        if ( pos < 0 )
          break;
        ++depths[pos];
      }
    }
    return out;
  }

  auto const& po = std::get<partially_ordered_params>( dist.kind() );
  auto const& names = po.vocab.names();
  std::size_t const n = names.size();
  std::vector<std::pair<formula, double>> terms;
  for ( std::size_t i = 0; i < n; ++i )
    if ( po.disjunction_prob < 1.0 )
      terms.emplace_back( formula::prop( names[i] ), ( 1.0 - po.disjunction_prob ) / double( n ) );
  if ( po.disjunction_prob > 0.0 )
    for ( std::size_t i = 0; i < n; ++i )
      for ( std::size_t j = 0; j < n; ++j )
        if ( i != j )
          terms.emplace_back( formula::make_or( formula::prop( names[i] ), formula::prop( names[j] ) ),
                              po.disjunction_prob / double( n * ( n - 1 ) ) );
  int const kc = po.conjuncts.max - po.conjuncts.min + 1;
  int const dc = po.depth.max - po.depth.min + 1;

  std::vector<std::pair<formula, double>> sequences;
  for ( int d = po.depth.min; d <= po.depth.max; ++d )
  {
    std::vector<std::size_t> idx( d, 0 );
    for ( ;; )
    {
      std::vector<formula> ts;
      double p = 1.0 / dc;
      for ( auto i : idx )
      {
        ts.push_back( terms[i].first );
        p *= terms[i].second;
      }
      sequences.emplace_back( po_sequence( ts ), p );
      if ( sequences.size() > cap )
        throw cap_exceeded_error( "task support exceeds cap " + std::to_string( cap ), sequences.size() );
      int pos = d - 1;
      while ( pos >= 0 && idx[pos] + 1 == terms.size() )
        idx[pos--] = 0;
      if ( pos < 0 )
        break;
      ++idx[pos];
    }
  }
  for ( int k = po.conjuncts.min; k <= po.conjuncts.max; ++k )
  {
    std::vector<std::size_t> idx( k, 0 );
    for ( ;; )
    {
      std::vector<formula> parts;
      double p = 1.0 / kc;
      for ( auto i : idx )
      {
        parts.push_back( sequences[i].first );
        p *= sequences[i].second;
      }
      push( conjunction( parts ), p );
      int pos = k - 1;
      while ( pos >= 0 && idx[pos] + 1 == sequences.size() )
        idx[pos--] = 0;
      if ( pos < 0 )
        break;
      ++idx[pos];
    }
  }
  return out;
}

inline vocabulary letters( std::size_t n )
{
  vocabulary v;
  for ( std::size_t i = 0; i < n; ++i )
    v.add( std::string( 1, char( 'a' + i ) ) );
  return v;
}

/*! \brief Named task distributions.

  letterworld-po / letterworld-avoid are the training spaces over the 12
  LetterWorld letters; upgen-* the larger generalization spaces;
  zoneenv-avoid the short avoidance space over four zone colours;
  bootcamp-avoid4, letterworld-avoid4 and lockedrooms-two-rooms are small
  spaces the exact solvers can enumerate.
*/
inline std::vector<std::string> task_preset_names()
{
  return { "letterworld-po",  "letterworld-avoid",     "upgen-depth",     "upgen-conjuncts",    "upgen-depth-avoid",
           "upgen-conjuncts-avoid", "zoneenv-avoid", "bootcamp-avoid4", "letterworld-avoid4", "lockedrooms-two-rooms" };
}

inline task_distribution task_preset( std::string const& name, std::uint64_t seed = default_seed )
{
  auto const po = [&]( int_range conj, int_range depth ) {
    return task_distribution( partially_ordered_params{ conj, depth, 0.25, letters( 12 ) }, seed );
  };
  auto const avoid = [&]( int_range conj, int_range depth, vocabulary v ) {
    return task_distribution( avoidance_params{ conj, depth, std::move( v ) }, seed );
  };
  if ( name == "letterworld-po" )
    return po( { 1, 4 }, { 1, 5 } );
  if ( name == "letterworld-avoid" )
    return avoid( { 1, 2 }, { 1, 3 }, letters( 12 ) );
  if ( name == "upgen-depth" )
    return po( { 2, 4 }, { 15, 15 } );
  if ( name == "upgen-conjuncts" )
    return po( { 12, 12 }, { 3, 5 } );
  if ( name == "upgen-depth-avoid" )
    return avoid( { 1, 1 }, { 6, 6 }, letters( 12 ) );
  if ( name == "upgen-conjuncts-avoid" )
    return avoid( { 3, 3 }, { 2, 2 }, letters( 12 ) );
  if ( name == "zoneenv-avoid" )
    return avoid( { 1, 1 }, { 1, 2 }, vocabulary{ "J", "W", "R", "Y" } );
  if ( name == "bootcamp-avoid4" )
    return avoid( { 1, 1 }, { 1, 2 }, letters( 4 ) );
  if ( name == "letterworld-avoid4" )
    return avoid( { 1, 1 }, { 1, 1 }, letters( 4 ) );
  if ( name == "lockedrooms-two-rooms" )
    return task_distribution( task_distribution::explicit_list{ { parse( "F (B & F G)" ), 1.0 }, { parse( "F (B & F R)" ), 1.0 } },
                              seed );
  throw invalid_argument_error( "unknown task preset '" + name + "'" );
}

} // namespace ltl2a
