/**
 * Rater session state machine.
 *
 * The service cursor is authoritative: the session only mirrors the item
 * currently served, enforces that audio playback started before a
 * submission, and guarantees one submission per item. Refreshing the page
 * re-fetches the same unjudged item from the service.
 */

import { ItemView, JudgmentPayload, StudyApi } from "./api.js";

export type SessionState = "loading" | "rating" | "submitting" | "done";

export interface PairwiseAnswer {
  likert: number; // 1..7
  screeningAnswer?: boolean; // required when the item carries the screening question
}

export interface MatchingAnswer {
  choiceIndex: number; // 0..2
}

export class RaterSession {
  state: SessionState = "loading";
  current: ItemView | null = null;
  private playbackStarted = false;
  private submittedIds = new Set<string>();

  constructor(
    private api: StudyApi,
    public readonly studyId: string,
    public readonly raterId: string,
  ) {}

  /** Fetch the next unjudged item; returns null when the study is complete. */
  async advance(): Promise<ItemView | null> {
    this.state = "loading";
    const next = await this.api.nextItem(this.studyId, this.raterId);
    if (next.done || !next.item) {
      this.state = "done";
      this.current = null;
      return null;
    }
    this.current = next.item;
    this.playbackStarted = false;
    this.state = "rating";
    return this.current;
  }

  markPlaybackStarted(): void {
    this.playbackStarted = true;
  }

  get canSubmit(): boolean {
    return this.state === "rating" && this.current !== null && this.playbackStarted;
  }

  /** Validate an answer against the current item; null means acceptable. */
  validate(answer: PairwiseAnswer | MatchingAnswer): string | null {
    const item = this.current;
    if (!item) return "no item is being rated";
    if (!this.playbackStarted) return "play the audio before submitting";
    if (this.submittedIds.has(item.item_id)) return "this item was already submitted";
    if (item.kind === "pairwise_caption") {
      const a = answer as PairwiseAnswer;
      if (!Number.isInteger(a.likert) || a.likert < 1 || a.likert > 7) {
        return "choose a rating between 1 and 7";
      }
      if (item.screening_enabled && a.screeningAnswer === undefined) {
        return "answer the screening question first";
      }
    } else {
      const a = answer as MatchingAnswer;
      if (!Number.isInteger(a.choiceIndex) || a.choiceIndex < 0
          || a.choiceIndex >= item.options.length) {
        return "choose one of the responses";
      }
    }
    return null;
  }

  /** Submit the answer for the current item and advance to the next one. */
  async submit(answer: PairwiseAnswer | MatchingAnswer): Promise<ItemView | null> {
    const problem = this.validate(answer);
    if (problem) throw new Error(problem);
    const item = this.current!;
    const payload: JudgmentPayload = {
      study_id: this.studyId,
      item_id: item.item_id,
      rater_id: this.raterId,
      value: item.kind === "pairwise_caption"
        ? (answer as PairwiseAnswer).likert
        : (answer as MatchingAnswer).choiceIndex,
    };
    if (item.kind === "pairwise_caption" && item.screening_enabled) {
      payload.screening_answer = (answer as PairwiseAnswer).screeningAnswer;
    }
    this.state = "submitting";
    await this.api.submitJudgment(payload);
    this.submittedIds.add(item.item_id);
    return this.advance();
  }
}
