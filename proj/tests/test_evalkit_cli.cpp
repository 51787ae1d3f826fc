/* The copyright in this software is being made available under the BSD
 * License, included below. This software may be subject to other third party
 * and contributor rights, including patent rights, and no such rights are
 * granted under this license.
 *
 * Copyright (c) 2026, The cupart Authors
 * All rights reserved.
 *
 * Redistribution and use in source and binary forms, with or without
 * modification, are permitted provided that the following conditions are met:
 *
 *  * Redistributions of source code must retain the above copyright notice,
 *    this list of conditions and the following disclaimer.
 *  * Redistributions in binary form must reproduce the above copyright notice,
 *    this list of conditions and the following disclaimer in the documentation
 *    and/or other materials provided with the distribution.
 *  * Neither the name of the copyright holder nor the names of its contributors
 *    may be used to endorse or promote products derived from this software
 *    without specific prior written permission.
 *
 * THIS SOFTWARE IS PROVIDED BY THE COPYRIGHT HOLDERS AND CONTRIBUTORS "AS IS"
 * AND ANY EXPRESS OR IMPLIED WARRANTIES, INCLUDING, BUT NOT LIMITED TO, THE
 * IMPLIED WARRANTIES OF MERCHANTABILITY AND FITNESS FOR A PARTICULAR PURPOSE
 * ARE DISCLAIMED. IN NO EVENT SHALL THE COPYRIGHT HOLDER OR CONTRIBUTORS
 * BE LIABLE FOR ANY DIRECT, INDIRECT, INCIDENTAL, SPECIAL, EXEMPLARY, OR
 * CONSEQUENTIAL DAMAGES (INCLUDING, BUT NOT LIMITED TO, PROCUREMENT OF
 * SUBSTITUTE GOODS OR SERVICES; LOSS OF USE, DATA, OR PROFITS; OR BUSINESS
 * INTERRUPTION) HOWEVER CAUSED AND ON ANY THEORY OF LIABILITY, WHETHER IN
 * CONTRACT, STRICT LIABILITY, OR TORT (INCLUDING NEGLIGENCE OR OTHERWISE)
 * ARISING IN ANY WAY OUT OF THE USE OF THIS SOFTWARE, EVEN IF ADVISED OF
 * THE POSSIBILITY OF SUCH DAMAGE.
 */

#include "doctest.h"

#include "cupart/Cli.hpp"
#include "cupart/Error.hpp"
#include "cupart/Evalkit.hpp"
#include "cupart/Synthetic.hpp"
#include "support/TempDir.hpp"

#include <fstream>
#include <sstream>

using namespace cupart;
using cupart::testing::TempDir;

namespace
{

struct CliRun
{
  int         code = 0;
  std::string out;
  std::string err;
};

CliRun cli( std::vector<std::string> args )
{
  std::ostringstream out, err;
  CliRun             run;
  run.code = runCli( args, out, err );
  run.out  = out.str();
  run.err  = err.str();
  return run;
}

std::string slurp( const std::filesystem::path& path )
{
  std::ifstream in( path );
  return std::string( std::istreambuf_iterator<char>( in ), {} );
}

void saveRandomModels( const std::filesystem::path& dir )
{
  ModelSet models;
  models.cu64 = buildTopology( 64, 1 );
  models.cu32 = buildTopology( 32, 1 );
  models.cu16 = buildTopology( 16, 1 );
  saveModelSet( dir, models );
}

} // namespace

TEST_CASE( "time saving" )
{
  CHECK( timeSaving( 100.0, 63.26 ) == doctest::Approx( 36.74 ).epsilon( 1e-12 ) );
  CHECK( timeSaving( 5.0, 5.0 ) == 0.0 );
  CHECK( timeSaving( 5.0, 0.0 ) == 100.0 );
  CHECK( timeSaving( 2.0, 3.0 ) == doctest::Approx( -50.0 ) );
  CHECK_THROWS_AS( timeSaving( 0.0, 1.0 ), Error );
}

TEST_CASE( "oracle classifier with the filter disabled agrees with the oracle everywhere" )
{
  std::vector<Frame> frames{ makeMixedFrame( 128, 128, 1, 0 ), makeMixedFrame( 128, 64, 2, 1 ) };
  OracleClassifier   oracle( { 27 } );
  EvalConfig         config;
  config.qp                  = { 27 };
  config.pipeline.thresholds = { 0, 0, 0 };
  const auto report          = evaluate( frames, oracle, config );
  CHECK( report.frames == 2 );
  CHECK( report.ctus == 6 );
  CHECK( report.timed );
  CHECK( report.originalSeconds > 0.0 );
  for( const auto& s: report.sizes )
  {
    CAPTURE( s.cuSize );
    CHECK( s.confusion.total() > 0 );
    CHECK( s.confusion.accuracy() == 1.0 );
    CHECK( s.earlyTerminated == 0 );
  }
  CHECK( report.forSize( 64 ).confusion.total() == 6 );
}

TEST_CASE( "constant frames are fully early-terminated without errors" )
{
  std::vector<Frame> frames{ makeConstantFrame( 128, 128, 10, 0 ), makeConstantFrame( 128, 128, 250, 1 ) };
  OracleClassifier   oracle( { 32 } );
  const auto         report = evaluate( frames, oracle, {} );
  CHECK( report.classifierCalls == 0 );
  CHECK( report.earlyTerminatedFraction() == 1.0 );
  CHECK( report.forSize( 64 ).earlyTerminatedFraction() == 1.0 );
  CHECK( report.forSize( 64 ).earlyTermErrorRate() == 0.0 );
  CHECK( report.forSize( 32 ).confusion.total() == 0 );
}

TEST_CASE( "report files" )
{
  std::vector<Frame> frames{ makeSmoothFrame( 128, 64, 3 ) };
  OracleClassifier   oracle( { 32 } );
  EvalConfig         config;
  config.threads    = 2;
  const auto report = evaluate( frames, oracle, config );
  CHECK_FALSE( report.timed );
  std::ostringstream csv, timing;
  writeEvalCsv( csv, report );
  writeTimingCsv( timing, report );
  std::istringstream lines( csv.str() );
  std::string        line;
  int                count = 0;
  while( std::getline( lines, line ) )
  {
    count++;
  }
  CHECK( count == 4 );
  CHECK( csv.str().rfind( "cu_size,evaluated,", 0 ) == 0 );
  CHECK( timing.str() == "frames,ctus,classifier_calls,t_orig_s,t_prop_s,time_saving_percent\n1,2,"
                           + std::to_string( report.classifierCalls ) + ",,,\n" );
  CHECK( formatEvalSummary( report ).find( "timing disabled" ) != std::string::npos );
}

TEST_CASE( "cli: decide on a constant frame writes non-split roots" )
{
  TempDir dir;
  saveRandomModels( dir / "models" );
  writePgm( dir / "flat.pgm", makeConstantFrame( 128, 64, 90 ) );
  const auto run = cli( { "decide", "--input", ( dir / "flat.pgm" ).string(), "--models", ( dir / "models" ).string(),
                          "--out", ( dir / "out" ).string() } );
  CHECK( run.code == 0 );
  CHECK( slurp( dir / "out" / "partitions.txt" ) == "0 0 0 0\n0 64 0 0\n" );
  CHECK( slurp( dir / "out" / "trace.csv" ).rfind( "frame,ctu_x,ctu_y,size,x,y,stage,p_split\n", 0 ) == 0 );
}

TEST_CASE( "cli: stats, extract and train" )
{
  TempDir dir;
  writePgm( dir / "a.pgm", makeMixedFrame( 128, 128, 4 ) );
  auto run = cli( { "stats", "--input", dir.path().string(), "--qp", "32", "--out", ( dir / "stats" ).string() } );
  REQUIRE( run.code == 0 );
  CHECK( run.out.find( "NS/S" ) != std::string::npos );
  CHECK( std::filesystem::exists( dir / "stats" / "class_stats.txt" ) );
  CHECK( std::filesystem::exists( dir / "stats" / "density_range_16.csv" ) );

  run = cli( { "extract", "--input", ( dir / "a.pgm" ).string(), "--out", ( dir / "ds" ).string() } );
  REQUIRE( run.code == 0 );
  const auto ds = readDataset( dir / "ds" / "cu16.cupd" );
  CHECK( ds.records.size() == 64 );
  CHECK( ds.qp == 32 );

  run = cli( { "train", "--input", ( dir / "ds" / "cu16.cupd" ).string(), "--steps", "2", "--batch-size", "4",
               "--out", ( dir / "m" ).string() } );
  CHECK( run.code == 0 );
  CHECK( std::filesystem::exists( dir / "m" / "cu16.cupm" ) );
  CHECK( slurp( dir / "m" / "train_log_cu16.csv" ).rfind( "step,loss,", 0 ) == 0 );

  run = cli( { "train", "--input", ( dir / "ds" / "cu16.cupd" ).string(), "--cu-size", "32", "--out",
               ( dir / "m2" ).string() } );
  CHECK( run.code != 0 );
}

TEST_CASE( "cli: errors" )
{
  TempDir dir;
  std::filesystem::create_directories( dir / "empty" );
  auto run = cli( { "stats", "--input", ( dir / "empty" ).string(), "--out", ( dir / "o" ).string() } );
  CHECK( run.code != 0 );
  CHECK( run.err.find( "no frames" ) != std::string::npos );

  run = cli( { "eval", "--input", ( dir / "empty" ).string(), "--out", ( dir / "o" ).string() } );
  CHECK( run.code != 0 );
  CHECK( run.err.find( "usage error" ) != std::string::npos );
  CHECK( run.err.find( "--models" ) != std::string::npos );

  run = cli( { "frobnicate" } );
  CHECK( run.code != 0 );
  CHECK( run.err.find( "usage error" ) != std::string::npos );

  run = cli( { "stats", "--input", ( dir / "missing.pgm" ).string(), "--out", ( dir / "o" ).string() } );
  CHECK( run.code == 1 );
  CHECK( run.err.rfind( "cupart: error:", 0 ) == 0 );

  run = cli( { "--help" } );
  CHECK( run.code == 0 );
  CHECK( run.out.find( "decide" ) != std::string::npos );
}
