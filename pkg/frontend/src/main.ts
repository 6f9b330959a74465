/**
 * Browser bootstrap: wires the session state machine to the DOM.
 *
 * Open as /app/index.html?study=<id>&rater=<name> on the study service
 * (or pass server=<url> when the UI is hosted elsewhere).
 */

import { StudyApi } from "./api.js";
import { MatchingAnswer, PairwiseAnswer, RaterSession } from "./session.js";
import { renderDone, renderItem } from "./views.js";

function requireParam(params: URLSearchParams, name: string): string {
  const value = params.get(name);
  if (!value) {
    document.body.innerHTML = `<p class="banner">Missing ?${name}= query parameter.</p>`;
    throw new Error(`missing ${name}`);
  }
  return value;
}

function collectAnswer(root: HTMLElement, kind: string): PairwiseAnswer | MatchingAnswer | null {
  if (kind === "audio_text_match") {
    const chosen = root.querySelector<HTMLInputElement>("input[name=choice]:checked");
    return chosen ? { choiceIndex: Number(chosen.value) } : null;
  }
  const likert = root.querySelector<HTMLInputElement>("input[name=likert]:checked");
  if (!likert) return null;
  const answer: PairwiseAnswer = { likert: Number(likert.value) };
  const screening = root.querySelector<HTMLInputElement>("input[name=screening]:checked");
  if (screening) answer.screeningAnswer = screening.value === "yes";
  return answer;
}

async function showCurrent(root: HTMLElement, api: StudyApi, session: RaterSession) {
  const item = session.current;
  if (!item) {
    root.innerHTML = renderDone();
    return;
  }
  root.innerHTML = renderItem(item, api.mediaUrl(item.audio_ref));

  const audio = root.querySelector<HTMLAudioElement>("#clip-audio")!;
  const submit = root.querySelector<HTMLButtonElement>("#submit-btn")!;
  const notice = root.querySelector<HTMLElement>("#notice")!;

  audio.addEventListener("play", () => {
    session.markPlaybackStarted();
    submit.disabled = false;
    notice.textContent = "";
  });
  audio.addEventListener("error", () => {
    root.querySelector("#media-banner")?.classList.remove("hidden");
  });

  submit.addEventListener("click", async () => {
    const answer = collectAnswer(root, item.kind);
    if (!answer) {
      notice.textContent = "Choose an answer first.";
      return;
    }
    const problem = session.validate(answer);
    if (problem) {
      notice.textContent = problem;
      return;
    }
    submit.disabled = true;
    try {
      await session.submit(answer);
      await showCurrent(root, api, session);
    } catch (err) {
      notice.textContent = String(err);
      submit.disabled = false;
    }
  });
}

export async function start(): Promise<void> {
  const params = new URLSearchParams(window.location.search);
  const server = params.get("server") ?? window.location.origin;
  const api = new StudyApi(server);
  const session = new RaterSession(
    api,
    requireParam(params, "study"),
    requireParam(params, "rater"),
  );
  const root = document.getElementById("app")!;
  await session.advance();
  await showCurrent(root, api, session);
}

if (typeof window !== "undefined" && typeof document !== "undefined") {
  start().catch((err) => console.error(err));
}
