#include <gtest/gtest.h>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <string>
#include <sys/wait.h>

namespace
{

struct result
{
  int code = -1;
  std::string out;
};

/* `prefix` goes before the binary: environment assignments or a pipe */
result run( std::string const& args, std::string const& prefix = "" )
{
  std::string const cmd = prefix + " " + std::string( LTL2A_CLI_PATH ) + " " + args + " 2>/dev/null";
  result r;
  FILE* p = popen( cmd.c_str(), "r" );
  if ( !p )
    return r;
  std::array<char, 4096> buf{};
  std::size_t n = 0;
  while ( ( n = fread( buf.data(), 1, buf.size(), p ) ) > 0 )
    r.out.append( buf.data(), n );
  int const status = pclose( p );
  r.code = WIFEXITED( status ) ? WEXITSTATUS( status ) : -1;
  return r;
}

} // namespace

TEST( Cli, ProgressExample )
{
  auto const r = run( "progress 'F (R & F G)' R" );
  EXPECT_EQ( r.code, 0 );
  EXPECT_EQ( r.out, "F G\n" );
  EXPECT_EQ( run( "progress 'a U b' a a b" ).out, "a U b\na U b\ntrue\n" );
  EXPECT_EQ( run( "progress 'G !c' '{}' c" ).out, "G !c\nfalse\n" );
}

TEST( Cli, ProgressReadsStdin )
{
  auto const r = run( "progress 'F (R & F G)'", "printf 'B\\nR\\nG\\n' |" );
  EXPECT_EQ( r.out, "F (F G & R)\nF G\ntrue\n" );
}

TEST( Cli, CheckPasses )
{
  auto const r = run( "check --cases 10000 --seed 7" );
  EXPECT_EQ( r.code, 0 );
  EXPECT_EQ( r.out, "10000/10000 pass\n" );
}

TEST( Cli, Count )
{
  EXPECT_EQ( run( "count --preset letterworld-avoid" ).out, "510287712\n" );
}

TEST( Cli, SeedFlagAndEnvironmentVariable )
{
  auto const a = run( "--seed 5 sample -n 4" );
  EXPECT_EQ( a.code, 0 );
  EXPECT_EQ( run( "--seed 5 sample -n 4" ).out, a.out );
  EXPECT_EQ( run( "sample -n 4" ).out, run( "--seed 20210701 sample -n 4" ).out );
  EXPECT_EQ( run( "sample -n 4", "LTL2A_SEED=5" ).out, a.out );
  EXPECT_EQ( run( "--seed 5 sample -n 4", "LTL2A_SEED=9" ).out, a.out );
  EXPECT_NE( run( "--seed 6 sample -n 4" ).out, a.out );
}

TEST( Cli, JsonIsByteIdenticalAcrossRunsAndWorkerCounts )
{
  auto const a = run( "--json --seed 11 --workers 1 eval --env bootcamp --policy random --episodes 200" );
  auto const b = run( "--json --seed 11 --workers 4 eval --env bootcamp --policy random --episodes 200" );
  EXPECT_EQ( a.code, 0 );
  EXPECT_EQ( a.out, b.out );
  EXPECT_NE( a.out.find( "\"schema\": \"ltl2a.metrics/1\"" ), std::string::npos );
}

TEST( Cli, SolveTwoRooms )
{
  auto const r = run( "solve --env lockedrooms" );
  EXPECT_EQ( r.code, 0 );
  EXPECT_NE( r.out.find( "success_rate 1\n" ), std::string::npos );
  EXPECT_NE( r.out.find( "total_reward 1\n" ), std::string::npos );
}

TEST( Cli, EvalCsv )
{
  auto const r = run( "eval --env lockedrooms --policy optimal --episodes 20" );
  EXPECT_EQ( r.code, 0 );
  EXPECT_EQ( r.out.substr( 0, r.out.find( '\n' ) ),
             "env,task_dist,policy,n,success_rate,mean_discounted_return,mean_total_reward,ci90" );
  EXPECT_NE( r.out.find( "lockedrooms,lockedrooms-two-rooms,optimal,20,1," ), std::string::npos );
}

TEST( Cli, Export )
{
  auto const g = run( "export graph '!r U (j & !p U k)'" );
  EXPECT_EQ( g.code, 0 );
  EXPECT_NE( g.out.find( "\"schema\": \"ltl2a.graph/1\"" ), std::string::npos );
  EXPECT_EQ( run( "export prefix 'a U (b & X c)'" ).out, "U a & b X c\n" );
  EXPECT_EQ( run( "export observation --env lockedrooms" ).code, 0 );
}

TEST( Cli, ExitCodes )
{
  EXPECT_EQ( run( "" ).code, 2 );
  EXPECT_EQ( run( "frobnicate" ).code, 2 );
  EXPECT_EQ( run( "check --cases notanumber" ).code, 2 );
  EXPECT_EQ( run( "run --env marsworld" ).code, 2 );
  EXPECT_EQ( run( "progress 'a &' a" ).code, 1 );
  EXPECT_EQ( run( "count --preset no-such-preset" ).code, 1 );
  EXPECT_EQ( run( "count --tasks /nonexistent/tasks.json" ).code, 1 );
  EXPECT_EQ( run( "--help" ).code, 0 );
}
