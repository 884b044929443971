import { beforeEach, describe, expect, it } from 'vitest';

import { AboutPage } from '../src/about.js';
import { MockApi } from './mock_api.js';

const HEADER = 'project,hash,author_name,author_email,timestamp_utc,message,label';

describe('about page', () => {
  let api: MockApi;
  let root: HTMLElement;

  beforeEach(() => {
    document.body.innerHTML = '';
    api = new MockApi();
    api.exportBody =
      `${HEADER}\r\n` +
      'web,abc1234,Alice,a@x.org,2022-01-01T00:00:00Z,"fix crash\n",corrective\r\n' +
      'web,def5678,Bob,b@x.org,2022-01-02T00:00:00Z,add feature,adaptive\r\n';
    root = document.createElement('div');
    document.body.appendChild(root);
  });

  it('download link points at the export endpoint (byte pass-through)', async () => {
    await new AboutPage(root, api).render();
    const link = root.querySelector<HTMLAnchorElement>('.about-download')!;
    expect(link.getAttribute('href')).toBe(api.exportUrl());
    expect(link.getAttribute('download')).toBe('dataset.csv');
  });

  it('inline preview is built from exactly the export endpoint body', async () => {
    await new AboutPage(root, api).render();
    // the page fetched the same endpoint the download uses, once
    expect(api.calls.filter((c) => c.method === 'exportCsv').length).toBe(1);
    const rows = root.querySelectorAll('.about-table tbody tr');
    expect(rows.length).toBe(2);
    expect(rows[0].textContent).toContain('abc1234');
  });

  it('table columns match the dataset csv header', async () => {
    await new AboutPage(root, api).render();
    const headers = [...root.querySelectorAll('.about-table th')].map((th) => th.textContent);
    expect(headers).toEqual(HEADER.split(','));
  });

  it('project-scoped export link carries the project', async () => {
    await new AboutPage(root, api).render('web');
    const link = root.querySelector<HTMLAnchorElement>('.about-download')!;
    expect(link.getAttribute('href')).toBe('/api/export?project=web');
  });

  it('paginates fifty rows at a time', async () => {
    const rows = Array.from(
      { length: 120 },
      (_, i) => `web,${String(i).padStart(7, '0')},A,a@x.org,2022-01-01T00:00:00Z,m,corrective`,
    );
    api.exportBody = `${HEADER}\r\n${rows.join('\r\n')}\r\n`;
    await new AboutPage(root, api).render();
    expect(root.querySelectorAll('.about-table tbody tr').length).toBe(50);
    expect(root.querySelector('.about-pager span')?.textContent).toContain('120 rows');

    const next = [...root.querySelectorAll<HTMLButtonElement>('.about-pager button')][1];
    next.click();
    next.click();
    expect(root.querySelectorAll('.about-table tbody tr').length).toBe(20);
  });

  it('fetch failure is shown inline', async () => {
    api.exportCsv = async () => {
      throw new Error('boom');
    };
    await new AboutPage(root, api).render();
    expect(root.querySelector('.about-error')?.textContent).toContain('boom');
  });
});
