// Match-review dialog controller: one candidate pair at a time, mirroring the
// automatic loop's one-pair-per-iteration policy. Decisions go straight to
// the API; the next pair is refetched, never predicted locally.

import { ApiClient, ApiError } from "./api.js";
import type { Candidate, SessionSummary } from "./types.js";

export type ReviewState = "loading" | "reviewing" | "complete" | "exhausted" | "error";

export class ReviewController {
  state: ReviewState = "loading";
  current: Candidate | null = null;
  session: SessionSummary | null = null;
  lastError: ApiError | null = null;

  private pendingVerdict: "accept" | "reject" | null = null;

  constructor(
    private readonly api: ApiClient,
    readonly sessionId: string,
  ) {}

  async load(): Promise<void> {
    this.session = await this.api.getSession(this.sessionId);
    await this.advance();
  }

  /** Fetch the next top-ranked pair, or settle on a terminal state. */
  private async advance(): Promise<void> {
    const { candidates } = await this.api.candidates(this.sessionId, 1);
    if (candidates.length > 0) {
      this.current = candidates[0];
      this.state = "reviewing";
      return;
    }
    this.current = null;
    this.session = await this.api.getSession(this.sessionId);
    this.state = this.session.T_size === 0 ? "complete" : "exhausted";
  }

  async accept(): Promise<void> {
    return this.decide("accept");
  }

  async reject(): Promise<void> {
    return this.decide("reject");
  }

  private async decide(verdict: "accept" | "reject"): Promise<void> {
    if (!this.current) throw new Error("no candidate is under review");
    const pair = this.current;
    try {
      this.session = await this.api.postDecision(this.sessionId, {
        template_node: pair.frontier,
        target_node: pair.candidate,
        verdict,
        actor: "user",
      });
      this.lastError = null;
      this.pendingVerdict = null;
      await this.advance();
    } catch (err) {
      if (err instanceof ApiError) {
        // e.g. TargetTaken when another actor claimed the node; keep the pair
        // on screen and offer a retry
        this.lastError = err;
        this.pendingVerdict = verdict;
        this.state = "error";
        return;
      }
      throw err;
    }
  }

  /** Re-run the decision that failed, or refresh the queue if none did. */
  async retry(): Promise<void> {
    const verdict = this.pendingVerdict;
    this.state = "reviewing";
    if (verdict && this.current) {
      await this.decide(verdict);
    } else {
      await this.advance();
    }
  }

  /** Progress counters straight from the session payload. */
  progress(): { matched: number; total: number } {
    const s = this.session;
    if (!s) return { matched: 0, total: 0 };
    return { matched: s.S_size, total: s.S_size + s.T_size };
  }
}
