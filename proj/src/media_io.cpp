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

/** \file     media_io.cpp
    \brief    raw YUV / PGM ingestion, CTU padding and CU block slicing
*/

#include "cupart/MediaIo.hpp"
#include "cupart/Error.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <iterator>
#include <string>

namespace cupart
{

namespace
{

int paddedExtent( int extent )
{
  return std::max( kCtuSize, ( extent + kCtuSize - 1 ) / kCtuSize * kCtuSize );
}

std::vector<uint8_t> readAll( const std::filesystem::path& path )
{
  std::ifstream in( path, std::ios::binary );
  if( !in )
  {
    throw FormatError( "cannot open " + path.string() );
  }
  return std::vector<uint8_t>( std::istreambuf_iterator<char>( in ), std::istreambuf_iterator<char>() );
}

// PGM header tokens are whitespace separated; '#' starts a comment running to end of line.
std::string nextPgmToken( const std::vector<uint8_t>& bytes, size_t& pos )
{
  for( ;; )
  {
    while( pos < bytes.size() && std::isspace( bytes[pos] ) )
    {
      pos++;
    }
    if( pos < bytes.size() && bytes[pos] == '#' )
    {
      while( pos < bytes.size() && bytes[pos] != '\n' )
      {
        pos++;
      }
      continue;
    }
    break;
  }
  std::string token;
  while( pos < bytes.size() && !std::isspace( bytes[pos] ) && bytes[pos] != '#' )
  {
    token.push_back( static_cast<char>( bytes[pos++] ) );
  }
  return token;
}

int parsePositive( const std::string& token, const char* what )
{
  int value = 0;
  try
  {
    size_t used = 0;
    value       = std::stoi( token, &used );
    if( used != token.size() )
    {
      throw FormatError( "" );
    }
  }
  catch( const std::exception& )
  {
    throw FormatError( std::string( "PGM: bad " ) + what + " '" + token + "'" );
  }
  if( value <= 0 )
  {
    throw FormatError( std::string( "PGM: non-positive " ) + what );
  }
  return value;
}

} // namespace

Frame makeFrame( int width, int height, std::vector<uint8_t> luma, int index )
{
  if( width <= 0 || height <= 0 )
  {
    throw FormatError( "frame dimensions must be positive" );
  }
  if( luma.size() != static_cast<size_t>( width ) * height )
  {
    throw FormatError( "luma plane length does not match frame dimensions" );
  }
  Frame frame;
  frame.index        = index;
  frame.sourceWidth  = width;
  frame.sourceHeight = height;
  frame.width        = paddedExtent( width );
  frame.height       = paddedExtent( height );
  if( frame.width == width && frame.height == height )
  {
    frame.luma = std::move( luma );
    return frame;
  }
  frame.luma.resize( static_cast<size_t>( frame.width ) * frame.height );
  for( int y = 0; y < frame.height; y++ )
  {
    const uint8_t* src = &luma[static_cast<size_t>( std::min( y, height - 1 ) ) * width];
    uint8_t*       dst = &frame.luma[static_cast<size_t>( y ) * frame.width];
    std::copy( src, src + width, dst );
    std::fill( dst + width, dst + frame.width, src[width - 1] );
  }
  return frame;
}

LumaBlock makeBlock( int size, std::vector<uint8_t> samples, BlockOrigin origin )
{
  if( !isCuSize( size ) && size != 2 && size != 4 )
  {
    throw ShapeError( "unsupported block size " + std::to_string( size ) );
  }
  if( samples.size() != static_cast<size_t>( size ) * size )
  {
    throw ShapeError( "block sample count does not match size" );
  }
  LumaBlock block;
  block.size     = size;
  block.samples  = std::move( samples );
  block.origin   = origin;
  block.refs.top.assign( size, kMissingReference );
  block.refs.left.assign( size, kMissingReference );
  return block;
}

LumaBlock extractBlock( const Frame& frame, int x, int y, int size )
{
  if( !isCuSize( size ) )
  {
    throw ShapeError( "invalid CU size " + std::to_string( size ) );
  }
  if( x < 0 || y < 0 || x % size || y % size || x + size > frame.width || y + size > frame.height )
  {
    throw ShapeError( "block outside frame or misaligned" );
  }
  LumaBlock block;
  block.size   = size;
  block.origin = { frame.index, x, y };
  block.samples.resize( static_cast<size_t>( size ) * size );
  for( int row = 0; row < size; row++ )
  {
    const uint8_t* src = &frame.luma[static_cast<size_t>( y + row ) * frame.width + x];
    std::copy( src, src + size, &block.samples[static_cast<size_t>( row ) * size] );
  }
  block.refs.top.resize( size );
  block.refs.left.resize( size );
  for( int i = 0; i < size; i++ )
  {
    block.refs.top[i]  = frame.at( x + i, std::max( y - 1, 0 ) );
    block.refs.left[i] = frame.at( std::max( x - 1, 0 ), y + i );
  }
  return block;
}

LumaBlock quadrant( const LumaBlock& parent, int index )
{
  if( index < 0 || index > 3 || parent.size < 2 )
  {
    throw ShapeError( "invalid quadrant request" );
  }
  const int half = parent.size / 2;
  const int qx   = ( index & 1 ) * half;
  const int qy   = ( index >> 1 ) * half;

  LumaBlock child;
  child.size   = half;
  child.origin = { parent.origin.frameIndex, parent.origin.x + qx, parent.origin.y + qy };
  child.samples.resize( static_cast<size_t>( half ) * half );
  for( int row = 0; row < half; row++ )
  {
    for( int col = 0; col < half; col++ )
    {
      child.samples[static_cast<size_t>( row ) * half + col] = parent.at( qx + col, qy + row );
    }
  }
  child.refs.top.resize( half );
  child.refs.left.resize( half );
  for( int i = 0; i < half; i++ )
  {
    child.refs.top[i]  = qy == 0 ? parent.refs.top[qx + i] : parent.at( qx + i, qy - 1 );
    child.refs.left[i] = qx == 0 ? parent.refs.left[qy + i] : parent.at( qx - 1, qy + i );
  }
  return child;
}

std::vector<LumaBlock> tile( const Frame& frame, int size )
{
  if( !isCuSize( size ) )
  {
    throw ShapeError( "invalid tile size " + std::to_string( size ) );
  }
  std::vector<LumaBlock> blocks;
  blocks.reserve( static_cast<size_t>( frame.width / size ) * ( frame.height / size ) );
  for( int y = 0; y < frame.height; y += size )
  {
    for( int x = 0; x < frame.width; x += size )
    {
      blocks.push_back( extractBlock( frame, x, y, size ) );
    }
  }
  return blocks;
}

std::vector<Frame> loadYuv420( const std::filesystem::path& path, int width, int height )
{
  if( width <= 0 || height <= 0 )
  {
    throw FormatError( "YUV dimensions must be positive" );
  }
  if( width % 2 || height % 2 )
  {
    throw FormatError( "4:2:0 requires even dimensions" );
  }
  const auto   bytes      = readAll( path );
  const size_t lumaBytes  = static_cast<size_t>( width ) * height;
  const size_t frameBytes = lumaBytes * 3 / 2;
  if( bytes.empty() )
  {
    throw FormatError( path.string() + ": empty file" );
  }
  if( bytes.size() % frameBytes )
  {
    throw FormatError( path.string() + ": size " + std::to_string( bytes.size() ) + " is not a multiple of the "
                       + std::to_string( width ) + "x" + std::to_string( height ) + " I420 frame size" );
  }
  std::vector<Frame> frames;
  for( size_t offset = 0; offset < bytes.size(); offset += frameBytes )
  {
    std::vector<uint8_t> luma( bytes.begin() + offset, bytes.begin() + offset + lumaBytes );
    frames.push_back( makeFrame( width, height, std::move( luma ), static_cast<int>( frames.size() ) ) );
  }
  return frames;
}

Frame loadPgm( const std::filesystem::path& path, int index )
{
  const auto bytes = readAll( path );
  size_t     pos   = 0;
  if( nextPgmToken( bytes, pos ) != "P5" )
  {
    throw FormatError( path.string() + ": not a binary PGM (P5)" );
  }
  const int width  = parsePositive( nextPgmToken( bytes, pos ), "width" );
  const int height = parsePositive( nextPgmToken( bytes, pos ), "height" );
  const int maxval = parsePositive( nextPgmToken( bytes, pos ), "maxval" );
  if( maxval != 255 )
  {
    throw FormatError( path.string() + ": maxval " + std::to_string( maxval ) + " unsupported (need 255)" );
  }
  pos++; // single whitespace before the raster
  const size_t count = static_cast<size_t>( width ) * height;
  if( pos > bytes.size() || bytes.size() - pos < count )
  {
    throw FormatError( path.string() + ": truncated PGM payload" );
  }
  std::vector<uint8_t> luma( bytes.begin() + pos, bytes.begin() + pos + count );
  return makeFrame( width, height, std::move( luma ), index );
}

void writeYuv420( const std::filesystem::path& path, std::span<const Frame> frames )
{
  std::ofstream out( path, std::ios::binary );
  if( !out )
  {
    throw FormatError( "cannot write " + path.string() );
  }
  for( const auto& frame: frames )
  {
    out.write( reinterpret_cast<const char*>( frame.luma.data() ), static_cast<std::streamsize>( frame.luma.size() ) );
    const std::vector<char> chroma( frame.luma.size() / 2, static_cast<char>( 128 ) );
    out.write( chroma.data(), static_cast<std::streamsize>( chroma.size() ) );
  }
}

void writePgm( const std::filesystem::path& path, const Frame& frame )
{
  std::ofstream out( path, std::ios::binary );
  if( !out )
  {
    throw FormatError( "cannot write " + path.string() );
  }
  out << "P5\n" << frame.width << " " << frame.height << "\n255\n";
  out.write( reinterpret_cast<const char*>( frame.luma.data() ), static_cast<std::streamsize>( frame.luma.size() ) );
}

std::vector<Frame> loadCorpus( std::span<const std::filesystem::path> inputs, int width, int height )
{
  namespace fs = std::filesystem;
  std::vector<Frame> frames;
  auto append = [&]( Frame frame ) {
    frame.index = static_cast<int>( frames.size() );
    frames.push_back( std::move( frame ) );
  };
  for( const auto& input: inputs )
  {
    if( fs::is_directory( input ) )
    {
      std::vector<fs::path> files;
      for( const auto& entry: fs::directory_iterator( input ) )
      {
        if( entry.is_regular_file() && entry.path().extension() == ".pgm" )
        {
          files.push_back( entry.path() );
        }
      }
      std::sort( files.begin(), files.end() );
      for( const auto& file: files )
      {
        append( loadPgm( file ) );
      }
    }
    else if( input.extension() == ".pgm" )
    {
      append( loadPgm( input ) );
    }
    else
    {
      for( auto& frame: loadYuv420( input, width, height ) )
      {
        append( std::move( frame ) );
      }
    }
  }
  return frames;
}

} // namespace cupart
