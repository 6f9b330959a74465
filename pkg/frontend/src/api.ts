/** Typed client for the study-hosting service endpoints. */

export type ItemKind = "pairwise_caption" | "audio_text_match" | "llm_detail";

/** An item as served to raters: answer keys are stripped server-side. */
export interface ItemView {
  item_id: string;
  kind: ItemKind;
  audio_ref: string;
  prompt: string;
  options: string[];
  screening_enabled: boolean;
}

export interface NextItemResponse {
  done: boolean;
  item?: ItemView;
}

export interface JudgmentPayload {
  study_id: string;
  item_id: string;
  rater_id: string;
  value: number;
  screening_answer?: boolean;
}

export class ApiError extends Error {
  constructor(public status: number, message: string) {
    super(message);
  }
}

async function asJson(resp: Response): Promise<any> {
  const body = await resp.json().catch(() => ({}));
  if (!resp.ok) {
    throw new ApiError(resp.status, body.error ?? `HTTP ${resp.status}`);
  }
  return body;
}

export class StudyApi {
  constructor(private baseUrl: string) {}

  async nextItem(studyId: string, raterId: string): Promise<NextItemResponse> {
    const url = `${this.baseUrl}/api/studies/${studyId}/items/next?rater=${encodeURIComponent(raterId)}`;
    return asJson(await fetch(url));
  }

  async submitJudgment(payload: JudgmentPayload): Promise<void> {
    await asJson(
      await fetch(`${this.baseUrl}/api/judgments`, {
        method: "POST",
        headers: { "Content-Type": "application/json" },
        body: JSON.stringify(payload),
      }),
    );
  }

  async results(studyId: string): Promise<any> {
    return asJson(await fetch(`${this.baseUrl}/api/studies/${studyId}/results`));
  }

  /** Upload a study definition (operator workflow, not used by raters). */
  async uploadStudy(items: object[]): Promise<string> {
    const body = await asJson(
      await fetch(`${this.baseUrl}/api/studies`, {
        method: "POST",
        headers: { "Content-Type": "application/json" },
        body: JSON.stringify({ items }),
      }),
    );
    return body.study_id;
  }

  mediaUrl(audioRef: string): string {
    return `${this.baseUrl}/media/${audioRef}`;
  }
}
