"""
Subdivision Reproduction MCP Server - FastMCP server over stdio

Exposes mask analysis, the step-wise oracle and the built-in schemes as tools.
Use --toolsets flag or SUBDIV_TOOLSETS env var to control which tools load.
"""

import argparse
import logging
from typing import Set

from fastmcp import FastMCP

try:
    from fastmcp.server.middleware.response_limiting import ResponseLimitingMiddleware
    HAS_RESPONSE_LIMITING = True
except ImportError:
    HAS_RESPONSE_LIMITING = False

from config import ALL_TOOLSETS, DEFAULT_TOOLSETS, configure_logging

logger = logging.getLogger("subdiv-repro.server")

mcp = FastMCP("Subdivision Reproduction")
if HAS_RESPONSE_LIMITING:
    mcp.add_middleware(ResponseLimitingMiddleware(max_size=100_000))


def parse_toolsets(value: str) -> Set[str]:
    return {t.strip() for t in value.split(",") if t.strip()}


def load_toolsets(toolsets: Set[str], server: FastMCP = mcp):
    """Register the requested toolsets on the server"""
    from toolsets_analysis import register_analysis_tools
    from toolsets_schemes import register_schemes_tools

    logger.info(f"Loading toolsets: {', '.join(sorted(toolsets))}")

    if "analysis" in toolsets or "all" in toolsets:
        register_analysis_tools(server)
        logger.info("  ✓ analysis (5 tools)")

    if "schemes" in toolsets or "all" in toolsets:
        register_schemes_tools(server)
        logger.info("  ✓ schemes (4 tools)")


def main(argv=None):
    parser = argparse.ArgumentParser(description="Subdivision Reproduction MCP Server")
    parser.add_argument(
        "--toolsets",
        type=str,
        default=None,
        help="Comma-separated list of toolsets to load (default: all)"
    )
    parser.add_argument(
        "--list-toolsets",
        action="store_true",
        help="List available toolsets and exit"
    )

    args = parser.parse_args(argv)
    configure_logging()

    if args.list_toolsets:
        print("Subdivision Reproduction MCP Server - Available Toolsets\n")
        print("  - analysis (5 tools) - zero conditions, tau, reproduction degree, oracle")
        print("  - schemes (4 tools) - built-in schemes, subdivision, cascade")
        print("\nUsage:")
        print("  python server.py                        # All toolsets")
        print("  python server.py --toolsets analysis    # Specific toolsets")
        print("  export SUBDIV_TOOLSETS='schemes' && python server.py")
        exit(0)

    requested = parse_toolsets(args.toolsets or DEFAULT_TOOLSETS)

    if "all" not in requested:
        invalid_toolsets = requested - set(ALL_TOOLSETS)
        if invalid_toolsets or not requested:
            logger.error(f"Invalid toolsets specified: {', '.join(sorted(invalid_toolsets))}")
            logger.error(f"Valid toolsets: {', '.join(ALL_TOOLSETS)}")
            logger.error("Use --list-toolsets to see all available toolsets")
            exit(1)

    load_toolsets(requested)

    # STDIO transport for desktop and IDE clients; stdout belongs to the protocol
    logger.info("Server ready for STDIO connections")
    mcp.run()


if __name__ == "__main__":
    main()
