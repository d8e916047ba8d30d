"""Length-prefixed TCP transport for interactive proof sessions.

Frame layout: u32 LE payload length, then a 1-byte message type, then the
message body.  The length covers the type byte plus body and is capped at
16 MiB.  One connection carries all rounds of one session; the verifier
treats any framing violation, timeout, or failed check as a rejection of
the whole session, never as a crash.
"""

from __future__ import annotations

import logging
import socket
import struct
from random import Random

from .instance import SDPInstance, Witness
from .protocol import (
    MSG_CHALLENGE,
    MSG_COMMIT,
    MSG_RESPONSE,
    CommitmentMsg,
    decode_response,
    encode_response,
    prover_commit,
    prover_respond,
    verifier_challenge,
    verify_round,
)

log = logging.getLogger("sdzkp.net")

FRAME_MAX = 16 * 1024 * 1024


class SessionError(OSError):
    """A peer broke the wire protocol."""


def send_frame(sock: socket.socket, msg_type: int, body: bytes) -> None:
    payload = bytes([msg_type]) + body
    if len(payload) > FRAME_MAX:
        raise SessionError(f"frame too large: {len(payload)} bytes")
    sock.sendall(struct.pack("<I", len(payload)) + payload)


def _recv_exact(sock: socket.socket, count: int) -> bytes:
    chunks = []
    remaining = count
    while remaining > 0:
        chunk = sock.recv(min(remaining, 1 << 16))
        if not chunk:
            raise SessionError("connection closed mid-frame")
        chunks.append(chunk)
        remaining -= len(chunk)
    return b"".join(chunks)


def recv_frame(sock: socket.socket) -> tuple[int, bytes]:
    header = _recv_exact(sock, 4)
    (length,) = struct.unpack("<I", header)
    if length == 0 or length > FRAME_MAX:
        raise SessionError(f"invalid frame length {length}")
    payload = _recv_exact(sock, length)
    return payload[0], payload[1:]


def recv_expected(sock: socket.socket, expected_type: int) -> bytes:
    msg_type, body = recv_frame(sock)
    if msg_type != expected_type:
        raise SessionError(f"expected message type {expected_type}, got {msg_type}")
    return body


def prover_session(sock: socket.socket, inst: SDPInstance, wit: Witness, rounds: int, rng: Random) -> None:
    """Drive the prover side of one session; raises SessionError on violations."""
    for i in range(rounds):
        state, msg = prover_commit(inst, wit, rng)
        send_frame(sock, MSG_COMMIT, msg.encode())
        body = recv_expected(sock, MSG_CHALLENGE)
        if len(body) != 1 or body[0] not in (0, 1, 2):
            raise SessionError(f"invalid challenge in round {i}")
        send_frame(sock, MSG_RESPONSE, encode_response(prover_respond(state, body[0])))
    log.info("prover finished %d rounds", rounds)


def verifier_session(sock: socket.socket, inst: SDPInstance, rounds: int, rng: Random) -> bool:
    """Drive the verifier side of one session.

    Returns the decision; every malformed message, unexpected type, timeout
    or failed round check rejects.  Never raises on peer-controlled input.
    """
    try:
        for i in range(rounds):
            commitment = CommitmentMsg.decode(recv_expected(sock, MSG_COMMIT))
            challenge = verifier_challenge(rng)
            send_frame(sock, MSG_CHALLENGE, bytes([challenge]))
            response = decode_response(recv_expected(sock, MSG_RESPONSE))
            if not verify_round(inst, commitment, challenge, response):
                log.info("round %d failed verification", i)
                return False
        return True
    except (SessionError, ValueError, OSError) as exc:
        log.info("session aborted: %s", exc)
        return False


def create_listener(host: str, port: int) -> socket.socket:
    listener = socket.socket(socket.AF_INET, socket.SOCK_STREAM)
    listener.setsockopt(socket.SOL_SOCKET, socket.SO_REUSEADDR, 1)
    listener.bind((host, port))
    listener.listen(1)
    return listener


def accept_and_verify(
    listener: socket.socket,
    inst: SDPInstance,
    rounds: int,
    rng: Random,
    timeout_s: float | None = None,
) -> bool:
    """Accept one connection and run a verifier session over it."""
    if timeout_s is not None:
        listener.settimeout(timeout_s)
    try:
        conn, peer = listener.accept()
    except (OSError, socket.timeout) as exc:
        log.info("no session: %s", exc)
        return False
    with conn:
        if timeout_s is not None:
            conn.settimeout(timeout_s)
        log.info("session with %s", peer)
        return verifier_session(conn, inst, rounds, rng)


def connect_and_prove(
    host: str,
    port: int,
    inst: SDPInstance,
    wit: Witness,
    rounds: int,
    rng: Random,
    timeout_s: float | None = None,
) -> None:
    with socket.create_connection((host, port), timeout=timeout_s) as sock:
        prover_session(sock, inst, wit, rounds, rng)
